#pragma once

#include <vector>

#include "latt/arith.hpp"

namespace latt {

// Row Hermite normal form: h = transform * a, with the nonzero rows of h first,
// positive pivots, and entries above each pivot reduced into [0, pivot).
struct HermiteForm {
  IntMatrix h;          // nonzero rows only
  IntMatrix transform;  // square, unimodular; rows beyond rank span the left kernel
  std::size_t rank = 0;
};

HermiteForm hermite_normal_form(const IntMatrix& a, bool with_transform = false);

// Basis (as rows) of {x in Z^rows : x * a = 0}; always saturated.
IntMatrix integer_left_kernel(const IntMatrix& a);

// left * m * right = diag(divisors) padded with zeros; divisors[i] | divisors[i+1].
struct SmithForm {
  std::vector<Integer> divisors;  // nonzero invariant factors, length = rank
  IntMatrix left;
  IntMatrix right;
};

SmithForm smith_normal_form(const IntMatrix& m);
// Throws InputError when an entry is not integral.
SmithForm smith_normal_form(const RatMatrix& m);

}  // namespace latt
