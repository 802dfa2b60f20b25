#include <random>
#include <set>

#include "doctest.h"
#include "latt/discglue.hpp"
#include "latt/isomgroup.hpp"
#include "latt/standard.hpp"

using namespace latt;

namespace {

AmbientVector half_vector(std::size_t n) { return AmbientVector(n, make_rational(1, 2)); }

AmbientVector a4_dual_vector(long k) {
  // k times the class of (4/5, -1/5, -1/5, -1/5, -1/5).
  AmbientVector v(5);
  v[0] = make_rational(4 * k, 5);
  for (std::size_t i = 1; i < 5; ++i) v[i] = make_rational(-k, 5);
  return v;
}

}  // namespace

TEST_CASE("empty glue code gives the orthogonal sum") {
  Lattice a4 = root_lattice_a(4);
  GlueCode code(a4, a4, {});
  Lattice l = overlattice(code);
  CHECK(same_lattice(l, orthogonal_sum(a4, a4)));
  CHECK(is_integral(code));
  CHECK(code.glue_order() == 1);
}

TEST_CASE("D8 with the half vector is E8") {
  Lattice d8 = root_lattice_d(8);
  GlueCode code(d8, std::nullopt, {{half_vector(8), {}}});
  CHECK(is_integral(code));
  CHECK(is_even_glue(code));
  Lattice l = overlattice(code);
  CHECK(is_even(l));
  CHECK(is_unimodular(l));
  CHECK(minimum(l) == 2);
  CHECK(kissing_number(l) == 240);
  CHECK(code.rank(2) == 1);
  CHECK(determinant(l) * 4 == determinant(d8));
}

TEST_CASE("A4 + A4 glue pairings") {
  Lattice a4 = root_lattice_a(4);
  DiscriminantGroup d(a4);
  CHECK(d.quadratic(d.coordinates(a4_dual_vector(1))) == make_rational(2, 5));
  CHECK(d.quadratic(d.coordinates(a4_dual_vector(2))) == make_rational(3, 5));
  GlueCode bad(a4, a4, {{a4_dual_vector(1), a4_dual_vector(1)}});
  CHECK_FALSE(is_even_glue(bad));
  CHECK_FALSE(is_integral(bad));
  GlueCode good(a4, a4, {{a4_dual_vector(1), a4_dual_vector(2)}});
  CHECK(is_integral(good));
  CHECK(is_even_glue(good));
  Lattice l = overlattice(good);
  CHECK(is_unimodular(l));
  CHECK(is_isometric(l, root_lattice_e8()));
  CHECK(determinant(l) * 25 == determinant(a4) * determinant(a4));
  CHECK_THROWS_AS(GlueCode(a4, a4, {{half_vector(5), a4_dual_vector(1)}}), InputError);
}

TEST_CASE("gram congruence") {
  Lattice a4 = root_lattice_a(4);
  CHECK(gram_congruence_check(RatMatrix(0, 0), RatMatrix(0, 0)));
  std::vector<AmbientVector> b{a4_dual_vector(1)}, c{a4_dual_vector(2)}, c_bad{a4_dual_vector(1)};
  // (c, c) = 6/5 and (b, b) = 4/5; Q values 3/5 and 2/5.
  CHECK(gram_congruence_check(a4, b, a4, c));
  CHECK_FALSE(gram_congruence_check(a4, b, a4, c_bad));
  CHECK_THROWS_AS(gram_congruence_check(a4, b, a4, std::vector<AmbientVector>{}), InputError);
  // A frame entry 12/5 asks for (c, c) = 3/5 mod Z.
  RatMatrix f{{make_rational(12, 5)}};
  CHECK(gram_congruence_check(f, RatMatrix{{make_rational(18, 5)}}));
  CHECK_FALSE(gram_congruence_check(f, RatMatrix{{make_rational(12, 5)}}));
}

TEST_CASE("glue integrality: inner products against discriminant forms") {
  // Random codes over orthogonal sums of A_{p-1} copies and D4.
  std::mt19937 rng(11);
  std::vector<std::pair<Lattice, Lattice>> pairs = {
      {root_lattice_d(4), root_lattice_d(4)},
      {orthogonal_sum(root_lattice_a(2), root_lattice_a(2)), root_lattice_a(2)},
      {root_lattice_a(4), orthogonal_sum(root_lattice_a(4), root_lattice_a(4))},
      {integer_lattice(2), root_lattice_d(6)},
  };
  int tested = 0, integral = 0;
  for (int t = 0; t < 200; ++t) {
    const auto& [a, b] = pairs[static_cast<std::size_t>(t) % pairs.size()];
    DiscriminantGroup da(a), db(b);
    std::vector<GlueVector> gens;
    std::size_t k = 1 + rng() % 2;
    for (std::size_t i = 0; i < k; ++i) {
      DiscElement x(da.rank()), y(db.rank());
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = static_cast<std::int64_t>(rng() % da.orders()[j]);
      for (std::size_t j = 0; j < y.size(); ++j) y[j] = static_cast<std::int64_t>(rng() % db.orders()[j]);
      gens.push_back({da.element(x), db.element(y)});
    }
    GlueCode code(a, b, gens);
    GlueFormCheck f = discriminant_form_check(code);
    CHECK(f.integral == is_integral(code));
    if (is_even(a) && is_even(b)) {
      CHECK(f.even == is_even_glue(code));
      if (is_even_glue(code)) CHECK(is_even(overlattice(code)));
    }
    Lattice l = overlattice(code);
    CHECK(determinant(l) * code.glue_order() * code.glue_order() == determinant(a) * determinant(b));
    if (f.integral) {
      CHECK(is_integral(l));
      ++integral;
    }
    ++tested;
  }
  CHECK(tested == 200);
  CHECK(integral > 0);
}

TEST_CASE("subspace counts match Gaussian binomials") {
  CHECK(gaussian_binomial(5, 2, 1) == 6);
  CHECK(gaussian_binomial(5, 3, 2) == 31);
  CHECK(gaussian_binomial(3, 4, 2) == 130);
  for (std::int64_t p : {2, 3, 5})
    for (std::size_t n = 0; n <= 4; ++n)
      for (std::size_t k = 0; k <= n; ++k) {
        SubspaceEnumerator it(p, n, k);
        std::vector<DiscElement> b;
        std::size_t count = 0;
        std::set<std::vector<DiscElement>> seen;
        while (it.next(b)) {
          ++count;
          seen.insert(b);
        }
        CHECK(Integer(static_cast<unsigned long>(count)) == gaussian_binomial(p, n, k));
        CHECK(seen.size() == count);
      }
  Lattice a4a4 = orthogonal_sum(root_lattice_a(4), root_lattice_a(4));
  DiscriminantGroup d(a4a4);
  CHECK(subspaces(d, 1).size() == 6);
  CHECK(subspaces(d, 0).size() == 1);
  CHECK_THROWS_AS(subspaces(DiscriminantGroup(root_lattice_a(3)), 1), InputError);
  Lattice a4x3 = orthogonal_sum(a4a4, root_lattice_a(4));
  CHECK(subspaces(DiscriminantGroup(a4x3), 2).size() == 31);
}

TEST_CASE("class minimum census on A4") {
  DiscriminantGroup d(root_lattice_a(4));
  ClassTable t(d);
  CHECK(class_minimum_census(t, {}, make_rational(4, 5)) == 0);
  std::vector<DiscElement> all{{1}};
  CHECK(class_minimum_census(t, all, make_rational(4, 5)) == 2);
  CHECK(class_minimum_census(t, all, make_rational(6, 5)) == 2);
  for (std::int64_t k = 1; k < 5; ++k) {
    Rational m = t.minimum({k});
    AmbientVector r = t.representative({k});
    CHECK(root_lattice_a(4).norm(r) == m);
    CHECK(d.coordinates(r) == DiscElement{k});
    CHECK(t.vectors_of_norm({k}, m).size() == (k == 1 || k == 4 ? 5u : 10u));
  }
  CHECK(t.vectors_of_norm({0}, 2).size() == 20);
}
