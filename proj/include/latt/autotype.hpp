#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latt/isomgroup.hpp"

namespace latt {

// Type p-(z,d)-s of an automorphism of prime order p.
struct AutType {
  std::int64_t p = 0;
  std::size_t z = 0;
  std::size_t d = 0;
  std::size_t s = 0;
  std::string to_string() const;  // "p-(z,d)-s"
  bool operator==(const AutType&) const = default;
};

// Fixed and image sublattices of sigma; empty optionals stand for the zero lattice.
struct TypeDecomposition {
  IntMatrix sigma;
  std::optional<Lattice> fixed_lattice;
  std::optional<Lattice> image_lattice;
  IntMatrix fixed_coords;  // rows: basis of the fixed lattice in coordinates of L
  IntMatrix image_coords;
  AutType type;
  Integer index;  // [L : fixed + image] = p^s
};

// Multiplicative order of an invertible integer matrix, up to `limit`; nullopt beyond it.
std::optional<std::int64_t> matrix_order(const IntMatrix& m, std::int64_t limit = 1 << 16);

// Integer matrix of an ambient linear map restricted to L, in coordinates of L.
// Throws InputError when the map does not preserve L.
IntMatrix coordinate_action(const Lattice& l, const RatMatrix& ambient_map);

TypeDecomposition decompose(const Lattice& l, const IntMatrix& sigma);
TypeDecomposition decompose(const Lattice& l, const Isometry& sigma);

struct UnimodularTypeChecks {
  bool fixed_elementary = false;   // disc(fixed) is p-elementary of rank s
  bool image_elementary = false;   // disc(image) is p-elementary of rank s
  bool dual_applicable = false;    // s == z
  bool dual_even = false;          // (image#, p Q) is even (integral when p = 2)
  bool dual_determinant = false;   // det(image#, p Q) = p^(z(p-1)) / det(image)
  bool passed() const { return fixed_elementary && image_elementary && (!dual_applicable || (dual_even && dual_determinant)); }
};

// Requires the ambient lattice to be even unimodular.
UnimodularTypeChecks check_unimodular_type(const Lattice& l, const TypeDecomposition& dec);

struct EvennessTypeChecks {
  bool fixed_even = false;
  bool image_even = false;
  bool passed() const { return fixed_even && image_even; }
};

// Requires L even and p odd.
EvennessTypeChecks check_evenness_type(const Lattice& l, const TypeDecomposition& dec);

// --- Cyclotomic integers -------------------------------------------------------

// Element of Z[zeta_p] on the basis 1, zeta, ..., zeta^(p-2).
using Cyclotomic = std::vector<Integer>;

// Reduces a coefficient vector of any length using zeta^p = 1 and the cyclotomic relation.
Cyclotomic cyclotomic_reduce(std::int64_t p, const std::vector<Integer>& coeffs);
Cyclotomic cyclotomic_conjugate(std::int64_t p, const Cyclotomic& a);
Cyclotomic cyclotomic_multiply(std::int64_t p, const Cyclotomic& a, const Cyclotomic& b);
Cyclotomic cyclotomic_zeta_power(std::int64_t p, std::int64_t k);
// Trace from Q(zeta_p) to Q.
Integer cyclotomic_trace(std::int64_t p, const Cyclotomic& a);

class CyclotomicMatrix {
 public:
  // Validates p prime, entry lengths and Hermitian symmetry.
  CyclotomicMatrix(std::int64_t p, std::vector<std::vector<Cyclotomic>> entries);
  std::int64_t p() const { return p_; }
  std::size_t size() const { return entries_.size(); }
  const Cyclotomic& operator()(std::size_t i, std::size_t j) const { return entries_[i][j]; }

 private:
  std::int64_t p_;
  std::vector<std::vector<Cyclotomic>> entries_;
};

// Z-lattice on the basis zeta^k e_i (index i*(p-1)+k) with (x, y) = scale * Tr(h(x, y)).
Lattice hermitian_trace_lattice(const CyclotomicMatrix& h, const Rational& scale);


}  // namespace latt
