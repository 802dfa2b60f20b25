#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latt/arith.hpp"

namespace latt {

// Coordinates of a vector in the ambient space Q^m.
using AmbientVector = RatVector;

// A full-rank Z-lattice inside a rational quadratic space (Q^m, ambient_form).
//
// Immutable after construction. The basis rows need not be canonical; use
// canonical() or same_lattice() for equality of lattices.
class Lattice {
 public:
  // Validates symmetry and positive definiteness of the form and full row rank of
  // the basis. Throws InputError on degenerate input.
  Lattice(RatMatrix basis, RatMatrix ambient_form, std::string label = {});

  // The lattice Z^n with the given Gram matrix (ambient_form = gram, basis = I).
  static Lattice from_gram(const RatMatrix& gram, std::string label = {});

  // Lattice generated by the rows of `generators`, in canonical (Hermite) basis.
  static Lattice generated_by(const RatMatrix& generators, const RatMatrix& ambient_form,
                              std::string label = {});
  // Same, reusing the (already validated) ambient space of `space`.
  static Lattice generated_in(const Lattice& space, const RatMatrix& generators, std::string label = {});

  const RatMatrix& basis() const { return basis_; }
  const RatMatrix& ambient_form() const { return *form_; }
  const RatMatrix& gram() const { return gram_; }
  const std::string& label() const { return label_; }
  std::size_t rank() const { return basis_.rows(); }
  std::size_t ambient_dim() const { return basis_.cols(); }

  Lattice with_label(std::string label) const;
  Lattice with_basis(RatMatrix basis) const;  // same ambient space
  Lattice canonical() const;

  // Ambient vector of integer coordinates x (x * basis).
  AmbientVector vector(const IntVector& coords) const;
  AmbientVector vector(std::span<const std::int64_t> coords) const;
  // Coordinates of v in the basis; nullopt when v is outside the rational span.
  std::optional<RatVector> coordinates(const AmbientVector& v) const;
  bool contains(const AmbientVector& v) const;

  Rational inner(const AmbientVector& a, const AmbientVector& b) const;
  Rational norm(const AmbientVector& v) const { return inner(v, v); }

  bool shares_ambient(const Lattice& other) const;

 private:
  Lattice(RatMatrix basis, std::shared_ptr<const RatMatrix> form, std::string label, bool validate);

  RatMatrix basis_;
  std::shared_ptr<const RatMatrix> form_;
  RatMatrix gram_;
  std::string label_;
  struct LazyInverse {
    std::once_flag once;
    RatMatrix value;
  };
  std::shared_ptr<LazyInverse> gram_inverse_;

  const RatMatrix& gram_inverse() const;
  friend Lattice dual_lattice(const Lattice& l);
};

RatMatrix gram(const Lattice& l);
Lattice dual_lattice(const Lattice& l);
Rational determinant(const Lattice& l);
bool is_integral(const Lattice& l);
bool is_even(const Lattice& l);
bool is_unimodular(const Lattice& l);
int extremal_bound(int n);

// Same ambient space and same canonical basis.
bool same_lattice(const Lattice& a, const Lattice& b);
// a is a sublattice of b (same ambient).
bool is_sublattice(const Lattice& a, const Lattice& b);
// [b : a] for a sublattice a of b of equal rank.
Integer sublattice_index(const Lattice& a, const Lattice& b);

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_sum(const Lattice& a, std::span<const AmbientVector> vectors);
Lattice lattice_intersection(const Lattice& a, const Lattice& b);

// Form scaled by c (norms multiply by c).
Lattice scaled(const Lattice& l, const Rational& c);
// Orthogonal sum in the block-diagonal join of the two ambient spaces.
Lattice orthogonal_sum(const Lattice& a, const Lattice& b);
// Ambient vector (x, y) in the join of a's and b's ambient spaces.
AmbientVector join_vectors(const AmbientVector& x, const AmbientVector& y);

}  // namespace latt
