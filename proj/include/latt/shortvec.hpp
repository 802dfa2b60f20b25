#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "latt/lattice.hpp"

namespace latt {

// --- LLL ---------------------------------------------------------------------

struct LllResult {
  Lattice lattice;      // same lattice, reduced basis = transform * original basis
  IntMatrix transform;  // unimodular
};

// Exact integral LLL on the Gram matrix. Requires 1/4 < delta < 1.
LllResult lll_reduce(const Lattice& l, const Rational& delta = Rational(3, 4));
// Unimodular T such that T * gram * T^T is delta-LLL reduced.
IntMatrix lll_gram_transform(const RatMatrix& gram, const Rational& delta = Rational(3, 4));
// Size reduction |mu_ij| <= 1/2 and the Lovasz condition, checked exactly.
bool is_lll_reduced(const RatMatrix& gram, const Rational& delta = Rational(3, 4));

// --- Enumeration -------------------------------------------------------------

std::uint64_t default_node_budget();
void set_default_node_budget(std::uint64_t budget);

struct EnumOptions {
  std::uint64_t node_budget = default_node_budget();
  bool keep_vectors = true;
  unsigned jobs = 1;  // parallel width over top-level coordinate values
};

struct ShortVector {
  std::vector<std::int64_t> coords;  // in the lattice's own basis
  Rational norm;
};

struct ShortVectorReport {
  Rational bound;
  std::optional<Rational> minimum;  // unset when nothing was found
  std::uint64_t kissing = 0;        // vectors at the minimum, both signs for lattices
  std::uint64_t count = 0;          // listed representatives
  std::vector<ShortVector> vectors;  // sorted by (norm, coords)
  std::uint64_t nodes = 0;
};

// Precomputed reduction and decomposition of one lattice, reused across queries.
class ShortVectorEngine {
 public:
  explicit ShortVectorEngine(const Lattice& l);
  ~ShortVectorEngine();
  ShortVectorEngine(ShortVectorEngine&&) noexcept;
  ShortVectorEngine& operator=(ShortVectorEngine&&) noexcept;

  const Lattice& lattice() const;
  const Lattice& reduced() const;
  const IntMatrix& transform() const;

  // One representative per +-pair of nonzero vectors with norm <= bound.
  ShortVectorReport enumerate(const Rational& bound, const EnumOptions& opts = {},
                              const std::function<void(const ShortVector&)>& emit = {}) const;
  // True iff some nonzero vector has norm < bound; stops at the first witness.
  bool has_vector_below(const Rational& bound, const EnumOptions& opts = {}) const;
  Rational minimum(const EnumOptions& opts = {}) const;

  // Vectors shift + l (l in the lattice) with norm <= bound; coords are those of l.
  ShortVectorReport coset(const AmbientVector& shift, const Rational& bound, const EnumOptions& opts = {}) const;
  Rational coset_minimum(const AmbientVector& shift, const EnumOptions& opts = {}) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ShortVectorReport enumerate_short(const Lattice& l, const Rational& bound, const EnumOptions& opts = {},
                                  const std::function<void(const ShortVector&)>& emit = {});
bool has_vector_below(const Lattice& l, const Rational& bound, const EnumOptions& opts = {});
Rational minimum(const Lattice& l, const EnumOptions& opts = {});
std::uint64_t kissing_number(const Lattice& l, const EnumOptions& opts = {});
bool is_extremal_even_unimodular(const Lattice& l);

// A coset shift + L with shift in the rational span of L but not in L.
class CosetQuery {
 public:
  CosetQuery(Lattice lattice, AmbientVector shift);  // validates membership
  const Lattice& lattice() const { return lattice_; }
  const AmbientVector& shift() const { return shift_; }

 private:
  Lattice lattice_;
  AmbientVector shift_;
};

Rational coset_minimum(const CosetQuery& q, const EnumOptions& opts = {});
ShortVectorReport coset_short_vectors(const CosetQuery& q, const Rational& bound, const EnumOptions& opts = {});

// (norm, count) with both signs counted, norms ascending, norm 0 excluded.
std::vector<std::pair<Rational, std::uint64_t>> theta_prefix(const Lattice& l, const Rational& bound,
                                                             const EnumOptions& opts = {});

}  // namespace latt
