#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "latt/lattice.hpp"

namespace latt {

// Element of a finite abelian group in coordinates w.r.t. its cyclic generators.
using DiscElement = std::vector<std::int64_t>;

// The finite group L#/L of an integral lattice with its induced forms.
//
// Generators g_i have orders d_1 | d_2 | ... (each > 1). Elements are addressed by
// coordinates a_i mod d_i, corresponding to the class of sum a_i g_i.
class DiscriminantGroup {
 public:
  explicit DiscriminantGroup(const Lattice& parent);

  const Lattice& parent() const { return parent_; }
  const std::vector<AmbientVector>& generators() const { return generators_; }
  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  Integer order() const;
  bool is_trivial() const { return orders_.empty(); }
  // Every order equals p (and the group is nontrivial).
  bool is_elementary(std::int64_t p) const;

  // (g_i, g_j) mod Z in [0, 1).
  const RatMatrix& bilinear_table() const { return bilinear_; }
  // Q(g_i) = (g_i, g_i)/2 mod Z in [0, 1); populated when the parent is even.
  const std::optional<RatVector>& quadratic_table() const { return quadratic_; }

  // Coordinates of the class of y, which must lie in the dual lattice.
  DiscElement coordinates(const AmbientVector& y) const;
  // Representative sum a_i g_i (not reduced to a short vector).
  AmbientVector element(const DiscElement& a) const;
  DiscElement reduce(DiscElement a) const;
  bool is_zero(const DiscElement& a) const;

  Rational bilinear(const DiscElement& a, const DiscElement& b) const;  // mod Z
  Rational quadratic(const DiscElement& a) const;                        // mod Z, parent even

  // All elements in lexicographic coordinate order (0 first).
  std::vector<DiscElement> elements() const;

  // Coordinates of an element from its dual-lattice coordinates c (y = c * dual basis).
  DiscElement from_dual_coordinates(const IntVector& c) const;

 private:
  Lattice parent_;
  std::vector<AmbientVector> generators_;
  std::vector<std::int64_t> orders_;
  RatMatrix bilinear_;
  std::optional<RatVector> quadratic_;
  IntMatrix dual_to_disc_;   // n x k: dual coords -> disc coords (mod orders)
  RatMatrix dual_basis_;     // rows: dual basis vectors
};

DiscriminantGroup discriminant_group(const Lattice& l);

}  // namespace latt
