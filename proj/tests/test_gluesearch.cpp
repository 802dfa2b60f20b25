#include <cstdio>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "latt/gluesearch.hpp"
#include "latt/standard.hpp"

using namespace latt;

namespace {

Lattice power_of(const Lattice& l, int k) {
  Lattice out = l;
  for (int i = 1; i < k; ++i) out = orthogonal_sum(out, l);
  return out;
}

// Frame of the first s unit classes of an elementary discriminant group.
std::vector<AmbientVector> unit_frame(const Lattice& l, std::size_t s) {
  DiscriminantGroup d(l);
  std::vector<AmbientVector> out;
  for (std::size_t i = 0; i < s; ++i) {
    DiscElement e(d.rank(), 0);
    e[i] = 1;
    out.push_back(d.element(e));
  }
  return out;
}

SearchConfig two_sided(const Lattice& a, const Lattice& b, std::int64_t p, std::size_t s) {
  SearchConfig c{.left = a, .right = b};
  c.p = p;
  c.glue_rank = s;
  c.target_min = 2;
  c.left_frame = unit_frame(a, s);
  return c;
}

// All tuples of right classes giving an even unimodular overlattice of minimum >= target.
std::vector<std::vector<DiscElement>> brute_force(const GlueSearch& g) {
  const auto& cfg = g.config();
  auto elems = g.disc().elements();
  std::vector<std::vector<DiscElement>> out;
  std::vector<std::size_t> idx(cfg.glue_rank, 0);
  for (;;) {
    std::vector<GlueVector> gens;
    std::vector<DiscElement> tuple;
    for (std::size_t j = 0; j < cfg.glue_rank; ++j) {
      tuple.push_back(elems[idx[j]]);
      gens.push_back({cfg.left ? cfg.left_frame[j] : AmbientVector{}, g.disc().element(elems[idx[j]])});
    }
    GlueCode code(cfg.left, cfg.right, gens);
    if (is_integral(code)) {
      Lattice l = overlattice(code);
      if (is_even(l) && is_unimodular(l) && minimum(l) >= cfg.target_min) out.push_back(tuple);
    }
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == elems.size()) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  return out;
}

// Orbits of tuples under the right symmetry, by closure under generator images.
std::set<std::set<std::vector<DiscElement>>> tuple_orbits(const GlueSearch& g,
                                                          const std::vector<std::vector<DiscElement>>& tuples) {
  std::set<std::set<std::vector<DiscElement>>> out;
  for (const auto& t : tuples) {
    std::set<std::vector<DiscElement>> orb{t};
    std::vector<std::vector<DiscElement>> todo{t};
    while (!todo.empty()) {
      auto x = todo.back();
      todo.pop_back();
      for (std::size_t k = 0; k < g.action().generator_count(); ++k) {
        std::vector<DiscElement> y;
        for (const auto& a : x) y.push_back(g.action().apply(a, k));
        if (orb.insert(y).second) todo.push_back(y);
      }
    }
    out.insert(orb);
  }
  return out;
}

void check_complete(const GlueSearch& g, const SearchResult& r) {
  auto brute = brute_force(g);
  auto orbits = tuple_orbits(g, brute);
  CHECK(r.lattices.size() == orbits.size());
  for (const auto& fl : r.lattices) {
    bool hit = false;
    for (const auto& o : orbits) hit = hit || o.count(fl.classes) > 0;
    CHECK(hit);
    CHECK(is_even(fl.lattice));
    CHECK(is_unimodular(fl.lattice));
    CHECK(minimum(fl.lattice) == g.config().target_min);
  }
}

}  // namespace

TEST_CASE("A4 + A4 toy search finds E8 once") {
  Lattice a4 = root_lattice_a(4);
  GlueSearch g(two_sided(a4, a4, 5, 1));
  CHECK(g.pool_norm(0) == make_rational(6, 5));
  CHECK(g.pool_classes(0).size() == 2);
  auto pool = g.candidate_pool(0, {});
  CHECK(pool.size() == 20);
  for (const auto& v : pool) CHECK(a4.norm(v) == make_rational(6, 5));
  auto anchors = g.anchor_enumeration();
  CHECK(anchors.size() == 1);
  SearchResult r = g.run();
  CHECK(r.complete);
  CHECK_FALSE(r.infeasible);
  REQUIRE(r.lattices.size() == 1);
  CHECK(is_isometric(r.lattices[0].lattice, root_lattice_e8()));
  CHECK(r.lattices[0].kissing == 240);
  CHECK(r.lattices[0].stabilizer_order * 2 == g.symmetry().order());
  check_complete(g, r);

  // Independent check over the 6 lines of (Z/5)^2.
  Lattice m = orthogonal_sum(a4, a4);
  DiscriminantGroup d(m);
  auto lines = subspaces(d, 1);
  REQUIRE(lines.size() == 6);
  std::size_t good = 0;
  for (const auto& line : lines) {
    Lattice l = lattice_sum(m, std::vector<AmbientVector>{d.element(line[0])});
    if (is_integral(l) && is_even(l) && is_unimodular(l) && minimum(l) == 2) {
      ++good;
      CHECK(is_isometric(l, root_lattice_e8()));
    }
  }
  CHECK(good == 2);
}

TEST_CASE("D8 search gives one orbit isometric to E8") {
  SearchConfig c{.left = std::nullopt, .right = root_lattice_d(8)};
  c.p = 2;
  c.glue_rank = 1;
  c.target_min = 2;
  c.left_frame = {AmbientVector{}};
  GlueSearch g(c);
  CHECK(g.pool_norm(0) == 2);
  SearchResult r = g.run();
  REQUIRE(r.lattices.size() == 1);
  CHECK(is_isometric(r.lattices[0].lattice, root_lattice_e8()));
  check_complete(g, r);
  // Exactly two of the three nonzero classes glue to an even unimodular lattice.
  DiscriminantGroup d(root_lattice_d(8));
  std::size_t good = 0;
  for (const auto& a : d.elements()) {
    if (d.is_zero(a)) continue;
    Lattice l = lattice_sum(root_lattice_d(8), std::vector<AmbientVector>{d.element(a)});
    if (is_integral(l) && is_even(l) && is_unimodular(l) && minimum(l) == 2) ++good;
  }
  CHECK(good == 2);
  // The depth filter keeps one class per orbit candidate.
  CHECK(g.candidate_pool(0, {}).size() == 2 * 64 * 2);
}

TEST_CASE("tetracode glue of A2^2 + A2^2 is complete") {
  Lattice a2a2 = power_of(root_lattice_a(2), 2);
  GlueSearch g(two_sided(a2a2, a2a2, 3, 2));
  SearchResult r = g.run({.check_monotonicity = true});
  CHECK(r.complete);
  REQUIRE(r.lattices.size() >= 1);
  for (const auto& fl : r.lattices) CHECK(is_isometric(fl.lattice, root_lattice_e8()));
  check_complete(g, r);
}

TEST_CASE("A4^2 + A4^2 search agrees with brute force") {
  Lattice a = power_of(root_lattice_a(4), 2);
  GlueSearch g(two_sided(a, a, 5, 2));
  SearchResult r = g.run();
  REQUIRE(r.lattices.size() >= 1);
  Lattice e8e8 = orthogonal_sum(root_lattice_e8(), root_lattice_e8());
  for (const auto& fl : r.lattices) CHECK(is_isometric(fl.lattice, e8e8));
  check_complete(g, r);
}

TEST_CASE("planted solutions survive every prefix") {
  Lattice a2a2 = power_of(root_lattice_a(2), 2);
  GlueSearch g(two_sided(a2a2, a2a2, 3, 2));
  auto brute = brute_force(g);
  REQUIRE_FALSE(brute.empty());
  for (const auto& sol : brute) {
    for (std::size_t k = 0; k <= sol.size(); ++k) {
      std::vector<DiscElement> prefix(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(k));
      CHECK(g.admissible(prefix));
      SearchResult r = g.run({.prefix = prefix});
      bool found = false;
      auto orbits = tuple_orbits(g, {sol});
      for (const auto& fl : r.lattices) found = found || orbits.begin()->count(fl.classes) > 0;
      CHECK(found);
    }
  }
}

TEST_CASE("depth filter and determinism on A2^4 + A2^4") {
  Lattice a = power_of(root_lattice_a(2), 4);
  SearchConfig c = two_sided(a, a, 3, 4);
  GlueSearch g(c);
  auto anchors = g.anchor_enumeration();
  REQUIRE_FALSE(anchors.empty());
  for (const auto& anc : anchors) {
    REQUIRE(anc.size() == 2);
    auto c3 = g.depth_filter(2, anc);
    CHECK(c3.size() <= g.pool_classes(2).size());
    for (const auto& v : c3) {
      // Every survivor is admissible on its own next to the anchors.
      std::vector<GlueVector> gens{{c.left_frame[0], g.classes().representative(anc[0])},
                                   {c.left_frame[1], g.classes().representative(anc[1])},
                                   {c.left_frame[2], g.classes().representative(v)}};
      Lattice l = overlattice(GlueCode(c.left, c.right, gens));
      CHECK_FALSE(has_vector_below(l, 2));
    }
  }
  SearchResult r1 = g.run();
  SearchResult r2 = g.run();
  SearchResult r3 = g.run({.jobs = 3});
  REQUIRE(r1.lattices.size() >= 1);
  CHECK(r1.stats.nodes == r2.stats.nodes);
  CHECK(r1.stats.raw_solutions == r2.stats.raw_solutions);
  CHECK(r1.stats.nodes == r3.stats.nodes);
  REQUIRE(r1.lattices.size() == r3.lattices.size());
  for (std::size_t i = 0; i < r1.lattices.size(); ++i) {
    CHECK(r1.lattices[i].classes == r2.lattices[i].classes);
    CHECK(r1.lattices[i].classes == r3.lattices[i].classes);
    CHECK(r1.lattices[i].stabilizer_order == r3.lattices[i].stabilizer_order);
  }
  Lattice e8e8 = orthogonal_sum(root_lattice_e8(), root_lattice_e8());
  for (const auto& fl : r1.lattices) CHECK(is_isometric(fl.lattice, e8e8));
  // Reordering depths by candidate count finds the same orbits.
  c.smallest_set_first = true;
  SearchResult r4 = GlueSearch(c).run();
  REQUIRE(r4.lattices.size() == r1.lattices.size());
  for (std::size_t i = 0; i < r1.lattices.size(); ++i) CHECK(r1.lattices[i].classes == r4.lattices[i].classes);
}

TEST_CASE("checkpoint, resume, budget and infeasibility") {
  Lattice a2a2 = power_of(root_lattice_a(2), 2);
  SearchConfig c = two_sided(a2a2, a2a2, 3, 2);
  GlueSearch g(c);
  auto path = (std::filesystem::temp_directory_path() / "latt_test_ckpt.json").string();
  SearchResult full = g.run({.checkpoint_path = path});
  SearchResult resumed = g.run({.resume_path = path});
  CHECK(resumed.lattices.size() == full.lattices.size());
  CHECK(resumed.stats.nodes == full.stats.nodes);
  SearchConfig other = c;
  other.target_min = 4;
  CHECK_THROWS_AS(GlueSearch(other).run({.resume_path = path}), InputError);
  std::remove(path.c_str());

  SearchConfig tight = two_sided(power_of(root_lattice_a(2), 4), power_of(root_lattice_a(2), 4), 3, 4);
  tight.node_budget = 5;
  SearchResult cut = GlueSearch(tight).run();
  CHECK_FALSE(cut.complete);
  CHECK_FALSE(cut.exhausted_items.empty());

  Lattice a4 = root_lattice_a(4);
  SearchConfig far = two_sided(a4, a4, 5, 1);
  far.target_min = 4;
  SearchResult none = GlueSearch(far).run();
  CHECK(none.infeasible);
  CHECK(none.lattices.empty());
}

TEST_CASE("configuration validation") {
  Lattice a4 = root_lattice_a(4);
  SearchConfig c = two_sided(a4, a4, 5, 1);
  c.p = 3;
  CHECK_THROWS_AS(validate(c), InputError);
  c = two_sided(a4, a4, 5, 1);
  c.declared_frame_gram = RatMatrix{{make_rational(6, 5)}};
  CHECK_THROWS_AS(validate(c), InputError);
  c.declared_frame_gram = RatMatrix{{make_rational(4, 5)}};
  CHECK_NOTHROW(validate(c));
  CHECK(config_digest(c) == config_digest(c));
  SearchConfig d = c;
  d.target_min = 4;
  CHECK(config_digest(c) != config_digest(d));
}

TEST_CASE("subspace orbits under discriminant actions") {
  Lattice a4a4 = power_of(root_lattice_a(4), 2);
  IsometryGroup g = automorphism_group(a4a4);
  DiscriminantAction act(g, DiscriminantGroup(a4a4));
  auto lines = subspace_orbits(act, 1);
  CHECK(lines.size() == 3);
  std::size_t total = 0;
  for (const auto& [rep, size] : lines) total += size;
  CHECK(total == 6);
  // Negation alone fixes every line.
  IntMatrix minus = IntMatrix::identity(8);
  for (std::size_t i = 0; i < 8; ++i) minus(i, i) = -1;
  IsometryGroup neg(a4a4, {minus});
  DiscriminantAction nact(neg, DiscriminantGroup(a4a4));
  CHECK(subspace_orbits(nact, 1).size() == 6);
  CHECK(echelon_mod_p({{2, 4}, {1, 2}}, 5) == std::vector<DiscElement>{{1, 2}});
}
