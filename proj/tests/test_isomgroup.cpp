#include <random>
#include <set>

#include "doctest.h"
#include "latt/isomgroup.hpp"
#include "latt/standard.hpp"

using namespace latt;

namespace {

// All integer matrices with entries in [-r, r] that preserve the gram matrix.
std::size_t brute_isometries(const RatMatrix& g, int r) {
  const std::size_t n = g.rows();
  std::vector<int> e(n * n, -r);
  std::size_t count = 0;
  while (true) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n * n; ++i) m(i / n, i % n) = e[i];
    if (preserves_gram(m, g, g)) ++count;
    std::size_t i = 0;
    while (i < e.size() && ++e[i] > r) e[i++] = -r;
    if (i == e.size()) break;
  }
  return count;
}

IntMatrix random_unimodular(std::mt19937& rng, std::size_t n) {
  IntMatrix u = IntMatrix::identity(n);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1), coef(-2, 2);
  for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    Integer c = coef(rng);
    for (std::size_t j = 0; j < n; ++j) u(a, j) += c * u(b, j);
  }
  return u;
}

Lattice scramble(const Lattice& l, const IntMatrix& u) { return l.with_basis(to_rational(u) * l.basis()); }

}  // namespace

TEST_CASE("Schreier-Sims on small permutation groups") {
  PermGroup s4(4);
  s4.add_generator(Perm{1, 0, 2, 3});
  s4.add_generator(Perm{1, 2, 3, 0});
  CHECK(s4.order() == 24);
  CHECK(s4.contains(Perm{3, 2, 1, 0}));
  PermGroup c4(4);
  c4.add_generator(Perm{1, 2, 3, 0});
  CHECK(c4.order() == 4);
  CHECK_FALSE(c4.contains(Perm{1, 0, 2, 3}));
  CHECK_FALSE(c4.add_generator(Perm{2, 3, 0, 1}));
  // Symmetric group on 7 points from a transposition and a 7-cycle.
  PermGroup s7(7);
  s7.add_generator(Perm{1, 0, 2, 3, 4, 5, 6});
  s7.add_generator(Perm{1, 2, 3, 4, 5, 6, 0});
  CHECK(s7.order() == 5040);
}

TEST_CASE("automorphism orders agree with brute force in dimension 2") {
  CHECK(automorphism_group(integer_lattice(2)).order() == 8);
  CHECK(brute_isometries(integer_lattice(2).gram(), 1) == 8);
  CHECK(automorphism_group(root_lattice_a(2)).order() == 12);
  CHECK(brute_isometries(root_lattice_a(2).gram(), 2) == 12);
}

TEST_CASE("classical automorphism group orders") {
  CHECK(automorphism_group(root_lattice_a(4)).order() == 240);
  CHECK(automorphism_group(root_lattice_d(4)).order() == 1152);
  CHECK(automorphism_group(integer_lattice(3)).order() == 48);
}

TEST_CASE("E8 automorphism group with orbit-stabilizer cross-check") {
  Lattice e8 = root_lattice_e8();
  AutStats stats;
  IsometryGroup g = automorphism_group(e8, stats);
  CHECK(g.order() == Integer("696729600"));
  for (const auto& iso : g.generators()) CHECK(preserves_gram(iso.matrix(), e8.gram(), e8.gram()));
  // Orbit of the first root and its stabilizer computed from Schreier generators.
  auto apply = [&](const std::uint32_t& p, std::size_t i) { return g.generator_perms()[i][p]; };
  auto orb = orbit_of<std::uint32_t>(0, g.generator_perms().size(), apply);
  CHECK(orb.points.size() == 240);
  IsometryGroup st = stabilizer(g, std::uint32_t{0}, apply);
  CHECK(st.order() * 240 == g.order());
  for (const auto& iso : st.generators()) {
    auto v = g.points()[0];
    IntVector x(8);
    for (std::size_t i = 0; i < 8; ++i) x[i] = static_cast<long>(v[i]);
    IntVector y = x * iso.matrix();
    CHECK(y == x);
  }
}

TEST_CASE("automorphism order is invariant under basis change") {
  std::mt19937 rng(5);
  Lattice a4 = root_lattice_a(4);
  for (int t = 0; t < 5; ++t) CHECK(automorphism_group(scramble(a4, random_unimodular(rng, 4))).order() == 240);
}

TEST_CASE("isometry witnesses for scrambled bases") {
  std::mt19937 rng(9);
  for (int t = 0; t < 20; ++t) {
    Lattice l = t % 2 ? root_lattice_a(4) : root_lattice_d(4);
    IntMatrix u = random_unimodular(rng, 4);
    Lattice m = scramble(l, u);
    auto w = is_isometric(l, m);
    REQUIRE(w);
    CHECK(preserves_gram(w->matrix(), l.gram(), m.gram()));
    auto back = is_isometric(m, l);
    CHECK(back);
  }
}

TEST_CASE("A4 and its rescaled dual") {
  // det(A4) = 5 while det(5 * A4#) = 5^4 / 5, so A4 is not 5-modular.
  Lattice a4 = root_lattice_a(4);
  Lattice r = scaled(dual_lattice(a4), 5);
  CHECK(determinant(r) == 125);
  CHECK_FALSE(is_isometric(a4, r));
  // A2 is 3-modular.
  Lattice a2 = root_lattice_a(2);
  Lattice r2 = scaled(dual_lattice(a2), 3);
  auto w = is_isometric(a2, r2);
  REQUIRE(w);
  CHECK(preserves_gram(w->matrix(), a2.gram(), r2.gram()));
}

TEST_CASE("E8+E8 and D16+ are not isometric") {
  Lattice e8 = root_lattice_e8();
  Lattice e16 = orthogonal_sum(e8, e8);
  Lattice d16 = d16_plus();
  CHECK(theta_prefix(e16, 4) == theta_prefix(d16, 4));
  CHECK_FALSE(is_isometric(e16, d16));
  CHECK_FALSE(is_isometric(d16, e16));
  CHECK(is_isometric(e16, e16));
}

TEST_CASE("discriminant action of Aut(A4) is by units of Z/5") {
  Lattice a4 = root_lattice_a(4);
  IsometryGroup g = automorphism_group(a4);
  DiscriminantGroup d = discriminant_group(a4);
  DiscriminantAction act(g, d);
  std::set<std::int64_t> image;
  for (std::size_t i = 0; i < act.generator_count(); ++i) {
    auto m = act.generator_matrix(i);
    REQUIRE(m.size() == 1);
    CHECK(m[0][0] != 0);
    image.insert(m[0][0]);
  }
  for (auto u : image) CHECK((u == 1 || u == 4 || u == 2 || u == 3));
  CHECK(image.count(4) == 1);  // -1 is in the group
  // Minus identity acts as negation.
  IntMatrix minus = IntMatrix::identity(4);
  for (std::size_t i = 0; i < 4; ++i) minus(i, i) = -1;
  CHECK(act.apply_matrix(act.matrix_for(minus), DiscElement{2}) == DiscElement{3});
}

TEST_CASE("trivial discriminant group gives trivial action") {
  IsometryGroup g = automorphism_group(root_lattice_a(2));
  Lattice e8 = root_lattice_e8();
  IsometryGroup h(e8, {});
  DiscriminantAction act(h, discriminant_group(e8));
  CHECK(act.generator_count() == 0);
  CHECK(act.disc().is_trivial());
  CHECK(h.order() == 1);
}

TEST_CASE("discriminant action respects composition") {
  Lattice l = orthogonal_sum(root_lattice_a(4), root_lattice_a(4));
  IsometryGroup g = automorphism_group(l);
  CHECK(g.order() == 115200);
  DiscriminantGroup d = discriminant_group(l);
  DiscriminantAction act(g, d);
  for (std::size_t i = 0; i < g.generators().size(); ++i)
    for (std::size_t j = 0; j < g.generators().size(); ++j) {
      IntMatrix gh = g.generators()[i].matrix() * g.generators()[j].matrix();
      auto mgh = act.matrix_for(gh);
      for (const auto& a : d.elements()) CHECK(act.apply_matrix(mgh, a) == act.apply(act.apply(a, i), j));
    }
}

TEST_CASE("orbits of Aut(A4+A4) on the lines of (Z/5)^2") {
  Lattice l = orthogonal_sum(root_lattice_a(4), root_lattice_a(4));
  IsometryGroup g = automorphism_group(l);
  DiscriminantAction act(g, discriminant_group(l));
  REQUIRE(act.disc().orders() == std::vector<std::int64_t>{5, 5});
  auto normalize = [](DiscElement a) {
    std::int64_t lead = a[0] != 0 ? a[0] : a[1];
    std::int64_t inv = 1;
    while ((lead * inv) % 5 != 1) ++inv;
    for (auto& x : a) x = (x * inv) % 5;
    return a;
  };
  std::vector<DiscElement> lines;
  for (const auto& a : act.disc().elements())
    if (!act.disc().is_zero(a)) lines.push_back(normalize(a));
  auto on_lines = [&](const DiscElement& a, std::size_t i) { return normalize(act.apply(a, i)); };
  auto orbits = orbit_partition(lines, act.generator_count(), on_lines);
  // Oracle: close the image matrices under products, then apply every element.
  std::set<std::vector<std::vector<std::int64_t>>> mats;
  std::vector<std::vector<std::vector<std::int64_t>>> todo{{{1, 0}, {0, 1}}};
  mats.insert(todo[0]);
  while (!todo.empty()) {
    auto m = todo.back();
    todo.pop_back();
    for (std::size_t i = 0; i < act.generator_count(); ++i) {
      auto s = act.generator_matrix(i);
      std::vector<std::vector<std::int64_t>> p(2, std::vector<std::int64_t>(2, 0));
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          for (int k = 0; k < 2; ++k) p[r][c] = ((p[r][c] + m[r][k] * s[k][c]) % 5 + 5) % 5;
      if (mats.insert(p).second) todo.push_back(p);
    }
  }
  std::set<std::set<DiscElement>> brute;
  std::set<DiscElement> distinct(lines.begin(), lines.end());
  for (const auto& x : distinct) {
    std::set<DiscElement> orb;
    for (const auto& m : mats) orb.insert(normalize(act.apply_matrix(m, x)));
    brute.insert(orb);
  }
  CHECK(distinct.size() == 6);
  CHECK(orbits.size() == brute.size());
  CHECK(orbits.size() == 3);
  for (const auto& o : orbits) CHECK(brute.count(std::set<DiscElement>(o.begin(), o.end())) == 1);
  // Orbit-stabilizer on a line.
  IsometryGroup st = stabilizer(g, orbits[0][0], on_lines);
  CHECK(st.order() * orbits[0].size() == g.order());
}

TEST_CASE("difference sublattices") {
  Lattice z3 = integer_lattice(3);
  IntMatrix minus = IntMatrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i) minus(i, i) = -1;
  auto r = group_difference_sublattice(z3, {minus});
  CHECK(r.rank == 3);
  CHECK_FALSE(r.rank_drop);
  CHECK(*r.index == 8);
  IntMatrix swap{{0, 1}, {1, 0}};
  auto s = group_difference_sublattice(integer_lattice(2), {swap});
  CHECK(s.rank == 1);
  CHECK(s.rank_drop);
  CHECK(s.sublattice.norm(s.sublattice.basis().row(0)) == 2);
  CHECK_THROWS_AS(group_difference_sublattice(z3, {IntMatrix::identity(3)}), InputError);
}
