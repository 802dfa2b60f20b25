// Writes the in-repo fixtures: gen_fixtures OUTDIR

#include <filesystem>
#include <iostream>

#include "json.hpp"
#include "latt/io.hpp"
#include "latt/standard.hpp"

using namespace latt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// E8 as A4 + A4 glued by an even class pair; the block 5-cycles act on it.
Lattice e8_glue_model() {
  Lattice a = orthogonal_sum(root_lattice_a(4), root_lattice_a(4));
  DiscriminantGroup d(a);
  for (std::int64_t b = 1; b < 5; ++b) {
    Lattice m = lattice_sum(a, std::vector<AmbientVector>{d.element({1, b})});
    if (is_even(m) && is_unimodular(m)) return m;
  }
  throw VerificationFailure("no even glue for A4 + A4");
}

// Order-5 element of type 5-(2,0)-0 in the coordinates of `e8`.
IntMatrix order5_on(const Lattice& e8) {
  Lattice model = e8_glue_model();
  RatMatrix perm(10, 10);
  const std::size_t cyc[10] = {1, 2, 3, 4, 0, 6, 7, 8, 9, 5};
  for (std::size_t i = 0; i < 10; ++i) perm(i, cyc[i]) = 1;
  IntMatrix s = coordinate_action(model, perm);
  auto g = is_isometric(e8, model);
  if (!g) throw VerificationFailure("glue model is not E8");
  IntMatrix gi = to_integer(inverse(to_rational(g->matrix())));
  IntMatrix out = g->matrix() * s * gi;
  if (!preserves_gram(out, e8.gram(), e8.gram())) throw VerificationFailure("conjugated element is not an isometry");
  if (decompose(e8, out).type != AutType{5, 2, 0, 0}) throw VerificationFailure("unexpected type");
  return out;
}

json rational_row(const AmbientVector& v) {
  json r = json::array();
  for (const auto& x : v) r.push_back(to_string(x));
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_fixtures OUTDIR\n";
    return 1;
  }
  fs::path dir = argv[1];
  fs::create_directories(dir);
  auto save = [&](const std::string& name, const Lattice& l) { write_file(dir / (name + ".lat"), emit_lattice(l.with_label(name))); };

  Lattice e8 = root_lattice_e8();
  save("z8", integer_lattice(8));
  save("a2", root_lattice_a(2));
  save("a3", root_lattice_a(3));
  save("a4", root_lattice_a(4));
  save("d4", root_lattice_d(4));
  save("d8", root_lattice_d(8));
  save("e8", e8);
  save("d16plus", d16_plus());
  save("e8e8", orthogonal_sum(e8, e8));
  save("leech", leech_lattice());

  IntMatrix s = order5_on(e8);
  write_file(dir / "e8_order5.iso", emit_matrix(s));

  Cyclotomic one5{1, 0, 0, 0}, one3{1, 0};
  write_file(dir / "unit5.herm", emit_hermitian(CyclotomicMatrix(5, {{one5}})));
  write_file(dir / "unit3.herm", emit_hermitian(CyclotomicMatrix(3, {{one3}})));

  DiscriminantGroup da(root_lattice_a(4));
  json a4a4 = {{"format", "latt-search 1"},
               {"label", "a4a4"},
               {"left", "a4.lat"},
               {"right", "a4.lat"},
               {"p", 5},
               {"glue_rank", 1},
               {"target_min", "2"},
               {"left_frame", json::array({rational_row(da.element({1}))})},
               {"symmetry", "right_aut"},
               {"expect_isometric_to", "e8.lat"}};
  write_file(dir / "a4a4.cfg", a4a4.dump(2) + "\n");
  json d8 = {{"format", "latt-search 1"},
             {"label", "d8"},
             {"right", "d8.lat"},
             {"p", 2},
             {"glue_rank", 1},
             {"target_min", "2"},
             {"symmetry", "right_aut"},
             {"expect_isometric_to", "e8.lat"}};
  write_file(dir / "d8.cfg", d8.dump(2) + "\n");
  return 0;
}
