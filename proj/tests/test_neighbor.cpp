#include <random>

#include "doctest.h"
#include "latt/neighbor.hpp"
#include "latt/standard.hpp"

using namespace latt;

namespace {

AmbientVector coord_vector(const Lattice& l, std::vector<std::int64_t> c) {
  return l.vector(IntVector(c.begin(), c.end()));
}

}  // namespace

TEST_CASE("Z^4 two-neighbor through (1,1,1,1) is Z^4 again") {
  Lattice z4 = integer_lattice(4);
  NeighborStep s = p_neighbor(z4, coord_vector(z4, {1, 1, 1, 1}), 2);
  CHECK(determinant(s.result) == 1);
  CHECK_FALSE(same_lattice(s.result, z4));
  CHECK(is_isometric(s.result, z4));
  CHECK(minimum(s.result) == 1);
}

TEST_CASE("inadmissible and invalid witnesses are rejected") {
  Lattice z2 = integer_lattice(2);
  CHECK_FALSE(admissible_witness(z2, coord_vector(z2, {1, 1}), 2).has_value());
  CHECK_THROWS_AS(p_neighbor(z2, coord_vector(z2, {1, 1}), 2), InputError);
  Lattice e8 = root_lattice_e8();
  CHECK_THROWS_AS(p_neighbor(e8, coord_vector(e8, {2, 0, 0, 0, 0, 0, 0, 0}), 2), InputError);  // in 2L#
  CHECK_THROWS_AS(p_neighbor(e8, coord_vector(e8, {1, 0, 0, 0, 0, 0, 0, 0}), 4), InputError);  // not prime
  AmbientVector half(8, Rational(1, 3));
  CHECK_THROWS_AS(p_neighbor(e8, half, 3), InputError);  // not in L
}

TEST_CASE("E8 neighbors are E8") {
  Lattice e8 = root_lattice_e8();
  for (std::int64_t p : {2, 3, 5}) {
    // First small basis combination whose class mod p has an admissible lift.
    std::optional<AmbientVector> v;
    for (std::int64_t a = 1; !v && a < 4; ++a)
      for (std::int64_t b = 0; !v && b < 4; ++b)
        for (std::int64_t c = 0; !v && c < 4; ++c)
          if (admissible_witness(e8, coord_vector(e8, {a, b, 0, c, 0, 0, 0, 1}), p))
            v = coord_vector(e8, {a, b, 0, c, 0, 0, 0, 1});
    REQUIRE(v.has_value());
    NeighborStep s = p_neighbor(e8, *v, p);
    CHECK(is_even(s.result));
    CHECK(is_unimodular(s.result));
    CHECK(kissing_number(s.result) == 240);
    Rational nn = e8.norm(s.witness);
    CHECK(nn.get_num() % (2 * p * p) == 0);
  }
}

TEST_CASE("random neighbor steps keep det, parity and step back") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<Lattice> seeds{root_lattice_e8(), root_lattice_d(4), integer_lattice(5), root_lattice_a(2)};
  int done = 0;
  for (int trial = 0; done < 50 && trial < 2000; ++trial) {
    const Lattice& l = seeds[static_cast<std::size_t>(trial) % seeds.size()];
    std::int64_t p = trial % 3 == 0 ? 2 : (trial % 3 == 1 ? 3 : 5);
    std::vector<std::int64_t> c(l.rank());
    for (auto& x : c) x = coef(rng);
    AmbientVector v = coord_vector(l, c);
    std::optional<NeighborStep> s;
    try {
      s = p_neighbor(l, v, p);
    } catch (const InputError&) {
      continue;
    }
    ++done;
    CHECK(determinant(s->result) == determinant(l));
    CHECK(is_integral(s->result));
    CHECK(is_even(s->result) == is_even(l));
    Lattice inter = lattice_intersection(l, s->result);
    CHECK(sublattice_index(inter, l) == p);
    CHECK(sublattice_index(inter, s->result) == p);
    if (is_even(l)) {
      // p*y for y in L outside the intersection is already admissible in the neighbor and leads back.
      for (std::size_t j = 0; j < l.rank(); ++j) {
        RatVector b = l.basis().row(j);
        if (inter.contains(b)) continue;
        for (auto& x : b) x *= p;
        NeighborStep back = p_neighbor(s->result, b, p);
        CHECK(same_lattice(back.result, l));
        break;
      }
    }
  }
  CHECK(done == 50);
}

TEST_CASE("class key separates E8^2 from D16+") {
  Lattice e8 = root_lattice_e8();
  ClassKey a = class_key(orthogonal_sum(e8, e8));
  ClassKey b = class_key(d16_plus());
  CHECK(a.kissing == 480);
  CHECK(b.kissing == 480);
  CHECK(a.components == std::vector<std::size_t>{240, 240});
  CHECK(b.components == std::vector<std::size_t>{480});
  CHECK(a.theta == b.theta);
  CHECK(a < b);
}

TEST_CASE("genus walk of E8") {
  GenusWalk w = genus_walk(root_lattice_e8(), 2);
  CHECK(w.complete);
  REQUIRE(w.classes.size() == 1);
  CHECK(w.classes[0].aut_order == Integer("696729600"));
  CHECK(w.mass == Rational(1) / Rational(Integer("696729600")));
}

TEST_CASE("genus walk of even unimodular rank 16") {
  Lattice e8 = root_lattice_e8();
  Rational mass = make_rational(Integer(691), Integer("277667181515243520000"));
  for (const Lattice& seed : {orthogonal_sum(e8, e8), d16_plus()}) {
    GenusWalk w = genus_walk(seed, 2);
    CHECK(w.complete);
    REQUIRE(w.classes.size() == 2);
    CHECK(w.classes[0].key.components == std::vector<std::size_t>{240, 240});
    CHECK(is_isometric(w.classes[1].lattice, d16_plus()));
    CHECK(w.mass == mass);
    CHECK(w.classes[0].aut_order == Integer("970864271032320000"));
    CHECK(w.classes[1].aut_order == Integer("685597979049984000"));
  }
}

TEST_CASE("genus walk of Z^8 terminates") {
  // Two-neighbors of an odd lattice may be even, so E8 shows up beside the odd classes.
  WalkLimits lim;
  lim.max_classes = 8;
  GenusWalk w = genus_walk(integer_lattice(8), 2, lim);
  CHECK(w.classes.size() >= 2);
  bool odd = false, even = false;
  for (const auto& c : w.classes) {
    CHECK(determinant(c.lattice) == 1);
    (is_even(c.lattice) ? even : odd) = true;
  }
  CHECK(odd);
  CHECK(even);
}
