#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "latt/discriminant.hpp"
#include "latt/permgroup.hpp"
#include "latt/shortvec.hpp"

namespace latt {

// Integer matrix g in lattice coordinates (row vectors, x -> x g) with
// g * target_gram * g^T = source_gram; for automorphisms both grams agree.
class Isometry {
 public:
  Isometry(const RatMatrix& gram, IntMatrix m);
  Isometry(const RatMatrix& source_gram, const RatMatrix& target_gram, IntMatrix m);
  const IntMatrix& matrix() const { return m_; }

 private:
  IntMatrix m_;
};

bool preserves_gram(const IntMatrix& g, const RatMatrix& source_gram, const RatMatrix& target_gram);

// Both signs of every lattice vector with norm <= depth, used as the permutation domain.
class VectorSet {
 public:
  VectorSet(const Lattice& l, const Rational& depth, const EnumOptions& opts = {});

  const Lattice& lattice() const { return lattice_; }
  const Rational& depth() const { return depth_; }
  std::size_t size() const { return coords_.size(); }
  const std::vector<std::int64_t>& operator[](std::size_t i) const { return coords_[i]; }
  std::optional<std::uint32_t> find(const std::vector<std::int64_t>& v) const;
  // (v_i, v_j) times the gram denominator.
  std::int64_t inner(std::size_t i, std::size_t j) const;
  std::int64_t inner_with(std::size_t i, const std::vector<std::int64_t>& w) const;
  const Integer& gram_denominator() const { return den_; }
  bool spans() const { return spans_; }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const;
  };
  Lattice lattice_;
  Rational depth_;
  Integer den_;
  std::vector<std::vector<std::int64_t>> coords_;
  std::vector<std::vector<std::int64_t>> coords_gram_;  // coords * scaled gram
  std::unordered_map<std::vector<std::int64_t>, std::uint32_t, Hash> index_;
  bool spans_ = false;
};

// Least norm N such that the lattice vectors of norm <= N span the ambient rational span.
Rational spanning_depth(const Lattice& l, const EnumOptions& opts = {});

// A finite group of isometries of one lattice, represented faithfully by its
// action on a spanning short-vector set.
class IsometryGroup {
 public:
  // Generators are verified; the order comes from a Schreier-Sims chain.
  IsometryGroup(const Lattice& l, const std::vector<IntMatrix>& generators,
                std::optional<Rational> depth_norm = std::nullopt);

  const Lattice& lattice() const { return points_->lattice(); }
  const std::vector<Isometry>& generators() const { return generators_; }
  const Integer& order() const { return order_; }
  bool contains(const IntMatrix& g) const;

  // Permutation action on the vector set.
  const VectorSet& points() const { return *points_; }
  const std::vector<Perm>& generator_perms() const { return perms_; }
  Perm perm_of(const IntMatrix& g) const;
  IntMatrix matrix_of(const Perm& p) const;
  const PermGroup& chain() const { return *chain_; }

  // Subgroup generated by the given permutations; the order is computed.
  IsometryGroup subgroup(const std::vector<Perm>& gens) const;

 private:
  explicit IsometryGroup(std::shared_ptr<const VectorSet> pts);
  void add(const Perm& p, IntMatrix m);

  std::shared_ptr<const VectorSet> points_;
  std::vector<std::uint32_t> base_rows_;   // indices of an independent set of points
  std::shared_ptr<const RatMatrix> base_inverse_;
  std::vector<Isometry> generators_;
  std::vector<Perm> perms_;
  std::shared_ptr<PermGroup> chain_;
  Integer order_ = 1;
};

struct AutStats {
  std::uint64_t nodes = 0;
  std::vector<std::size_t> orbit_lengths;  // per base level
};

// Full automorphism group by fingerprint-pruned backtracking; the order is the
// product of basic orbit lengths and is cross-checked against Schreier-Sims.
IsometryGroup automorphism_group(const Lattice& l, std::optional<Rational> depth_norm = std::nullopt,
                                 const EnumOptions& opts = {});
IsometryGroup automorphism_group(const Lattice& l, AutStats& stats, std::optional<Rational> depth_norm = std::nullopt,
                                 const EnumOptions& opts = {});

// Witness g with g * gram(l2) * g^T = gram(l1), or nullopt after exhaustive search.
// With aut2 = Aut(l2), the first image only ranges over orbit representatives.
std::optional<Isometry> is_isometric(const Lattice& l1, const Lattice& l2, const IsometryGroup* aut2 = nullptr,
                                     const EnumOptions& opts = {});

// --- Discriminant action -------------------------------------------------------

class DiscriminantAction {
 public:
  DiscriminantAction(const IsometryGroup& g, const DiscriminantGroup& d);

  const DiscriminantGroup& disc() const { return disc_; }
  std::size_t generator_count() const { return mats_.size(); }
  // Rows: images of the discriminant generators under generator i.
  const std::vector<std::vector<std::int64_t>>& generator_matrix(std::size_t i) const { return mats_[i]; }
  DiscElement apply(const DiscElement& a, std::size_t gen) const;
  // Action of an arbitrary isometry of the parent lattice.
  std::vector<std::vector<std::int64_t>> matrix_for(const IntMatrix& g) const;
  DiscElement apply_matrix(const std::vector<std::vector<std::int64_t>>& m, const DiscElement& a) const;

 private:
  DiscriminantGroup disc_;
  std::vector<std::vector<std::vector<std::int64_t>>> mats_;
};

DiscriminantAction induced_discriminant_action(const IsometryGroup& g, const DiscriminantGroup& d);

// --- Orbits and stabilizers for generator actions ------------------------------

// BFS orbit; parent[k] = (index of predecessor, generator) for k > 0.
template <class Point>
struct Orbit {
  std::vector<Point> points;
  std::map<Point, std::size_t> index;
  std::vector<std::pair<std::size_t, std::size_t>> parent;
};

template <class Point, class Apply>
Orbit<Point> orbit_of(const Point& start, std::size_t generator_count, Apply&& apply) {
  Orbit<Point> o;
  o.points.push_back(start);
  o.index.emplace(start, 0);
  o.parent.emplace_back(0, 0);
  for (std::size_t k = 0; k < o.points.size(); ++k) {
    for (std::size_t g = 0; g < generator_count; ++g) {
      Point q = apply(o.points[k], g);
      if (o.index.count(q)) continue;
      o.index.emplace(q, o.points.size());
      o.points.push_back(std::move(q));
      o.parent.emplace_back(k, g);
    }
  }
  return o;
}

// Orbit partition of `points` (which must be closed under the action). Each orbit
// is sorted; orbits are ordered by their least element, which is the representative.
template <class Point, class Apply>
std::vector<std::vector<Point>> orbit_partition(std::vector<Point> points, std::size_t generator_count,
                                                Apply&& apply) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::map<Point, bool> seen;
  for (const auto& p : points) seen.emplace(p, false);
  std::vector<std::vector<Point>> out;
  for (const auto& p : points) {
    if (seen[p]) continue;
    Orbit<Point> o = orbit_of(p, generator_count, apply);
    std::vector<Point> orb = o.points;
    for (const auto& q : orb) {
      auto it = seen.find(q);
      if (it == seen.end()) throw InputError("orbit_partition: point set is not closed under the action");
      it->second = true;
    }
    std::sort(orb.begin(), orb.end());
    out.push_back(std::move(orb));
  }
  return out;
}

// Transversal element mapping the orbit start to o.points[k].
template <class Point>
Perm transversal_perm(const IsometryGroup& g, const Orbit<Point>& o, std::size_t k) {
  std::vector<std::size_t> word;
  while (k != 0) {
    word.push_back(o.parent[k].second);
    k = o.parent[k].first;
  }
  Perm p = identity_perm(g.points().size());
  for (auto it = word.rbegin(); it != word.rend(); ++it) p = compose(p, g.generator_perms()[*it]);
  return p;
}

// Stabilizer of `point`; generator i of g acts by apply(point, i).
// The order is |g| / |orbit| and Schreier generators are added until it is reached.
template <class Point, class Apply>
IsometryGroup stabilizer(const IsometryGroup& g, const Point& point, Apply&& apply) {
  Orbit<Point> o = orbit_of(point, g.generator_perms().size(), apply);
  Integer target = g.order() / static_cast<unsigned long>(o.points.size());
  if (target * static_cast<unsigned long>(o.points.size()) != g.order())
    throw VerificationFailure("orbit length does not divide the group order");
  std::vector<Perm> gens;
  PermGroup acc(g.points().size());
  if (target == 1) return g.subgroup({});
  std::vector<Perm> trans(o.points.size());
  for (std::size_t k = 0; k < o.points.size(); ++k) trans[k] = transversal_perm(g, o, k);
  for (std::size_t k = 0; k < o.points.size() && acc.order() < target; ++k) {
    for (std::size_t i = 0; i < g.generator_perms().size() && acc.order() < target; ++i) {
      std::size_t j = o.index.at(apply(o.points[k], i));
      Perm s = compose(compose(trans[k], g.generator_perms()[i]), inverse(trans[j]));
      if (is_identity(s)) continue;
      if (acc.add_generator(s)) gens.push_back(s);
    }
  }
  IsometryGroup h = g.subgroup(gens);
  if (h.order() != target) throw VerificationFailure("stabilizer order does not match orbit-stabilizer count");
  return h;
}

// --- Difference sublattice -----------------------------------------------------

struct DifferenceSublattice {
  Lattice sublattice;
  std::size_t rank = 0;
  bool rank_drop = false;
  std::optional<Integer> index;  // [L : M] when M has full rank
};

// M = sum over generators s of (s - 1) L, in the same ambient space as L.
// Throws InputError when M is the zero lattice.
DifferenceSublattice group_difference_sublattice(const Lattice& l, const std::vector<IntMatrix>& generators);

}  // namespace latt
