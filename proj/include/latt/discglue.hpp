#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "latt/discriminant.hpp"
#include "latt/shortvec.hpp"

namespace latt {

// Pair of classes (b, c) with b in A# and c in B#; the right part is empty when B is absent.
struct GlueVector {
  AmbientVector left;
  AmbientVector right;
};

// Glue code between A and B, living in the orthogonal join of their ambient spaces.
// Either factor may be absent (but not both); its parts of the glue vectors are then empty.
class GlueCode {
 public:
  // Validates b in A# and c in B# for every generator.
  GlueCode(std::optional<Lattice> left, std::optional<Lattice> right, std::vector<GlueVector> generators);

  const std::optional<Lattice>& left() const { return left_; }
  const std::optional<Lattice>& right() const { return right_; }
  const std::vector<GlueVector>& generators() const { return generators_; }
  // A + B in the joined ambient space.
  const Lattice& base() const { return *base_; }
  AmbientVector joined(const GlueVector& g) const;
  // Order of the generated subgroup of (A#/A) x (B#/B).
  Integer glue_order() const;
  // s with glue_order = p^s; throws InputError when the order is not a power of p.
  std::size_t rank(std::int64_t p) const;

 private:
  std::optional<Lattice> left_;
  std::optional<Lattice> right_;
  std::vector<GlueVector> generators_;
  std::optional<Lattice> base_;
};

Lattice overlattice(const GlueCode& code);
// All pairwise products of the joined generators are integers.
bool is_integral(const GlueCode& code);
// Integral and every generator norm is even.
bool is_even_glue(const GlueCode& code);

// The same predicates read off the discriminant forms of A and B.
struct GlueFormCheck {
  bool integral = false;  // b_A(b_i, b_j) + b_B(c_i, c_j) = 0 mod Z
  bool even = false;      // additionally Q_A(b_i) + Q_B(c_i) = 0 mod Z
};
GlueFormCheck discriminant_form_check(const GlueCode& code);

// (c_i, c_j) = -(b_i, b_j) mod Z for all i, j, given the two Gram matrices.
bool gram_congruence_check(const RatMatrix& left_gram, const RatMatrix& right_gram);
// Same, with the products taken in the ambient forms of A and B.
bool gram_congruence_check(const Lattice& a, std::span<const AmbientVector> classes_left, const Lattice& b,
                           std::span<const AmbientVector> classes_right);
RatMatrix class_gram(const Lattice& l, std::span<const AmbientVector> classes);

// --- F_p-subspaces of elementary discriminant groups --------------------------

Integer gaussian_binomial(std::int64_t p, std::size_t n, std::size_t k);

// Subspaces of F_p^n of dimension k as reduced echelon bases, ordered by pivot
// columns and then lexicographically by the free entries.
class SubspaceEnumerator {
 public:
  SubspaceEnumerator(std::int64_t p, std::size_t n, std::size_t k);
  // Writes the next basis (k rows); returns false when exhausted.
  bool next(std::vector<DiscElement>& basis);

 private:
  bool next_pivots();
  void reset_free();
  std::int64_t p_;
  std::size_t n_, k_;
  std::vector<std::size_t> pivots_;
  std::vector<std::pair<std::size_t, std::size_t>> free_;  // (row, column) of free entries
  std::vector<std::int64_t> values_;
  bool started_ = false, done_ = false;
};

// Throws InputError unless D is p-elementary (or trivial with k = 0).
std::vector<std::vector<DiscElement>> subspaces(const DiscriminantGroup& d, std::size_t k);
std::int64_t elementary_prime(const DiscriminantGroup& d);  // 0 when D is not elementary

// All elements of the F_p-span of the basis, zero first.
std::vector<DiscElement> span_elements(const DiscriminantGroup& d, const std::vector<DiscElement>& basis);

// Coset minima and shortest representatives of discriminant classes, cached.
class ClassTable {
 public:
  explicit ClassTable(const DiscriminantGroup& d, EnumOptions opts = {});
  const DiscriminantGroup& disc() const { return disc_; }
  // Minimum norm over the class (0 for the zero class).
  Rational minimum(const DiscElement& a) const;
  // Shortest vector in the class, lexicographically least ambient coordinates among ties.
  AmbientVector representative(const DiscElement& a) const;
  // All vectors of the class with norm exactly `norm`, sorted by ambient coordinates.
  std::vector<AmbientVector> vectors_of_norm(const DiscElement& a, const Rational& norm) const;

 private:
  struct Entry {
    Rational minimum;
    AmbientVector representative;
  };
  const Entry& entry(const DiscElement& a) const;
  DiscriminantGroup disc_;
  EnumOptions opts_;
  std::shared_ptr<ShortVectorEngine> engine_;
  mutable std::mutex mutex_;
  mutable std::map<DiscElement, Entry> cache_;
};

// Nonzero classes in the span of `subspace` whose coset minimum equals norm_target.
std::size_t class_minimum_census(const ClassTable& table, const std::vector<DiscElement>& subspace,
                                 const Rational& norm_target);

}  // namespace latt
