#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latt/isomgroup.hpp"

namespace latt {

struct NeighborStep {
  Lattice source;
  AmbientVector witness;  // adjusted witness v with (v, v) = 0 mod 2p^2 (p^2 for odd lattices)
  std::int64_t prime = 0;
  Lattice result;
};

// Adjusts v within v + pL to an admissible witness; nullopt when impossible.
std::optional<AmbientVector> admissible_witness(const Lattice& l, const AmbientVector& v, std::int64_t p);

// {x in L : (x, v) = 0 mod p} + Z v/p for an admissible adjustment of v.
// Throws InputError for non-integral L, p not prime, v outside L, v in pL#, or inadmissible v.
NeighborStep p_neighbor(const Lattice& l, const AmbientVector& v, std::int64_t p);

// Invariants used to bucket classes before isometry tests.
struct ClassKey {
  Rational det;
  Rational minimum;
  std::uint64_t kissing = 0;
  std::vector<std::size_t> components;  // sorted sizes of the minimal-vector graph components
  std::vector<std::pair<Rational, std::uint64_t>> theta;
  bool operator==(const ClassKey&) const = default;
  bool operator<(const ClassKey& o) const;
};
ClassKey class_key(const Lattice& l, const EnumOptions& opts = {});

struct WalkLimits {
  std::size_t max_classes = 64;
  std::size_t max_witnesses = 4096;        // orbit representatives tried per class
  std::uint64_t max_line_space = 1u << 22;  // p^n above this switches to short-vector witnesses
  unsigned jobs = 1;
};

struct GenusClass {
  Lattice lattice;
  ClassKey key;
  Integer aut_order;
  std::size_t discovered_from = 0;  // index of the class it was first reached from (itself for the seed)
};

struct GenusWalk {
  std::vector<GenusClass> classes;  // sorted by key
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (from, to) class indices, deduplicated
  Rational mass = 0;                // sum of 1 / |Aut|
  bool complete = true;
  std::string note;
};

GenusWalk genus_walk(const Lattice& seed, std::int64_t p, const WalkLimits& limits = {});

}  // namespace latt
