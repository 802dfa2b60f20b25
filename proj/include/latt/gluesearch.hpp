#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "latt/discglue.hpp"
#include "latt/isomgroup.hpp"

namespace latt {

enum class SymmetryMode { none, right_aut };

struct SearchConfig {
  std::optional<Lattice> left;  // A, the b-side; absent for one-sided overlattices
  Lattice right;                // B, the c-side
  std::int64_t p = 2;
  std::size_t glue_rank = 0;
  Rational target_min = 0;
  std::vector<AmbientVector> left_frame;  // s classes of A#/A (empty vectors when A is absent)
  std::optional<RatMatrix> declared_frame_gram;
  SymmetryMode symmetry = SymmetryMode::right_aut;
  bool pin_first_anchor = true;
  bool smallest_set_first = false;
  std::uint64_t node_budget = 100000000;  // glue extensions over the whole run
  std::size_t checkpoint_interval = 1;    // work items between checkpoint writes
  std::string label;
};

// Exact F = ((b_i, b_j)); the zero matrix when A is absent.
RatMatrix frame_gram(const SearchConfig& c);
// Throws InputError on inconsistent configurations.
void validate(const SearchConfig& c);
// Hex digest of a canonical text rendering of the configuration.
std::string config_digest(const SearchConfig& c);

struct SearchOptions {
  unsigned jobs = 1;
  std::optional<std::string> checkpoint_path;  // written while running
  std::optional<std::string> resume_path;      // read before running
  std::vector<DiscElement> prefix;             // restrict to extensions of these classes
  bool check_monotonicity = false;             // compute min(L_k) on every extension
  const std::atomic<bool>* cancel = nullptr;
};

struct FoundLattice {
  std::vector<DiscElement> classes;  // canonical tuple (least in its symmetry orbit)
  std::vector<AmbientVector> glue;   // class representatives c_i
  Lattice lattice;
  Rational minimum;
  std::uint64_t kissing = 0;
  Integer stabilizer_order = 1;      // in the right symmetry group
  std::size_t raw_count = 0;         // raw solutions fused into this orbit
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t raw_solutions = 0;
  std::size_t work_items = 0;
  std::size_t anchors = 0;
  std::vector<std::size_t> min_candidates;  // per depth, over work items
  std::vector<std::size_t> max_candidates;
  double seconds = 0;
};

struct SearchResult {
  std::vector<FoundLattice> lattices;
  SearchStats stats;
  bool complete = true;       // false after budget exhaustion or cancellation
  bool infeasible = false;    // some depth has no class with the required form values
  std::vector<std::size_t> exhausted_items;
};

class GlueSearch {
 public:
  explicit GlueSearch(SearchConfig config);
  ~GlueSearch();

  const SearchConfig& config() const;
  const DiscriminantGroup& disc() const;
  const ClassTable& classes() const;
  const RatMatrix& frame() const;
  // Right symmetry group and its discriminant action (trivial group when symmetry is none).
  const IsometryGroup& symmetry() const;
  const DiscriminantAction& action() const;

  // Norm N_i required of c_i: least N >= target - F_ii with N = -F_ii mod 2.
  Rational pool_norm(std::size_t i) const;
  // Classes with Q = -F_ii / 2 mod Z and coset minimum N_i, sorted.
  const std::vector<DiscElement>& pool_classes(std::size_t i) const;
  // Vectors of B# with norm N_i in the pool classes of depth i satisfying the
  // congruences (v, c_j) = -F_ij mod Z against the anchors; sorted.
  std::vector<AmbientVector> candidate_pool(std::size_t i, const std::vector<DiscElement>& anchors) const;
  // Pool classes v of depth i such that <M, (b_j, c_j) for anchors, (b_i, v)> is integral
  // and has no vector of norm below the target.
  std::vector<DiscElement> depth_filter(std::size_t i, const std::vector<DiscElement>& anchors) const;
  // Pinned anchor tuples (length min(2, s)) up to the right symmetry.
  std::vector<std::vector<DiscElement>> anchor_enumeration() const;

  // Overlattice for a prefix of classes and its pruning status.
  Lattice lattice_of(const std::vector<DiscElement>& prefix) const;
  bool admissible(const std::vector<DiscElement>& prefix) const;

  SearchResult run(const SearchOptions& opts = {}) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

inline SearchResult run_search(const SearchConfig& c, const SearchOptions& opts = {}) {
  return GlueSearch(c).run(opts);
}

// Reduced echelon basis over F_p of the span of the rows.
std::vector<DiscElement> echelon_mod_p(std::vector<DiscElement> rows, std::int64_t p);

// Orbit representatives of the k-dimensional subspaces of an elementary discriminant
// group under the action, each as a reduced echelon basis, with orbit sizes.
std::vector<std::pair<std::vector<DiscElement>, std::size_t>> subspace_orbits(const DiscriminantAction& action,
                                                                              std::size_t k);

}  // namespace latt
