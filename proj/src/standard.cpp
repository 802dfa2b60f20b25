#include "latt/standard.hpp"

namespace latt {

namespace {

Lattice d_plus(std::size_t n, const std::string& label) {
  RatMatrix gens = root_lattice_d(n).basis();
  gens.append_row(RatVector(n, Rational(1, 2)));
  return Lattice::generated_by(gens, RatMatrix::identity(n), label);
}

}  // namespace

Lattice integer_lattice(std::size_t n) {
  return Lattice(RatMatrix::identity(n), RatMatrix::identity(n), "Z" + std::to_string(n));
}

Lattice root_lattice_a(std::size_t n) {
  if (n < 1) throw InputError("A_n needs n >= 1");
  RatMatrix b(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    b(i, i) = 1;
    b(i, i + 1) = -1;
  }
  return Lattice(b, RatMatrix::identity(n + 1), "A" + std::to_string(n));
}

Lattice root_lattice_d(std::size_t n) {
  if (n < 2) throw InputError("D_n needs n >= 2");
  RatMatrix b(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    b(i, i) = 1;
    b(i, i + 1) = -1;
  }
  b(n - 1, n - 2) = 1;
  b(n - 1, n - 1) = 1;
  return Lattice(b, RatMatrix::identity(n), "D" + std::to_string(n));
}

Lattice root_lattice_e8() { return d_plus(8, "E8"); }

Lattice d16_plus() { return d_plus(16, "D16+"); }

std::vector<std::vector<int>> golay_basis() {
  const int g[12] = {1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1};  // x^11+x^10+x^6+x^5+x^4+x^2+1, low degree first
  std::vector<std::vector<int>> words;
  for (int k = 0; k < 12; ++k) {
    std::vector<int> w(24, 0);
    int weight = 0;
    for (int i = 0; i < 12; ++i) {
      w[(i + k) % 23] = g[i];
      weight += g[i];
    }
    w[23] = weight % 2;
    words.push_back(w);
  }
  return words;
}

Lattice leech_lattice() {
  RatMatrix gens(0, 24);
  for (const auto& c : golay_basis()) {
    RatVector v(24);
    for (int i = 0; i < 24; ++i) v[i] = 2 * c[i];
    gens.append_row(v);
  }
  for (int j = 1; j < 24; ++j) {
    RatVector v(24), w(24);
    v[0] = 4;
    v[j] = 4;
    w[0] = 4;
    w[j] = -4;
    gens.append_row(v);
    gens.append_row(w);
  }
  RatVector s(24, Rational(1));
  s[0] = -3;
  gens.append_row(s);
  return Lattice::generated_by(gens, scale(RatMatrix::identity(24), Rational(1, 8)), "Leech");
}

}  // namespace latt
