#pragma once

#include <cstdint>
#include <vector>

#include "latt/arith.hpp"

namespace latt {

// Permutation of {0..n-1} acting on the right: point i maps to p[i].
using Perm = std::vector<std::uint32_t>;

Perm identity_perm(std::size_t n);
// Apply a, then b.
Perm compose(const Perm& a, const Perm& b);
Perm inverse(const Perm& p);
bool is_identity(const Perm& p);

// Deterministic Schreier-Sims stabilizer chain with explicit transversals.
class PermGroup {
 public:
  explicit PermGroup(std::size_t degree);

  std::size_t degree() const { return degree_; }
  // Adds g to the generating set; returns false (and changes nothing) if g is already a member.
  bool add_generator(const Perm& g);
  bool contains(const Perm& g) const;
  Integer order() const;
  const std::vector<Perm>& generators() const { return generators_; }
  std::vector<std::uint32_t> base() const;

 private:
  struct Level {
    std::uint32_t point;
    std::vector<Perm> gens;                // strong generators fixing earlier base points
    std::vector<std::int32_t> slot;        // point -> index into transversal, -1 if outside orbit
    std::vector<std::uint32_t> orbit;
    std::vector<Perm> transversal;         // transversal[k] maps point to orbit[k]
  };

  // Residue of g after sifting from `level`, and the level where it stopped.
  std::pair<Perm, std::size_t> sift(Perm g, std::size_t level) const;
  void rebuild_orbit(Level& lv) const;
  void extend(const Perm& residue, std::size_t from);
  void close();

  std::size_t degree_;
  std::vector<Perm> generators_;
  std::vector<Level> levels_;
};

}  // namespace latt
