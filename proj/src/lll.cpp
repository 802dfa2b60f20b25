#include "latt/shortvec.hpp"

namespace latt {

namespace {

Integer round_div(const Integer& num, const Integer& den) {
  // nearest integer to num/den for den > 0
  return floor_div(2 * num + den, 2 * den);
}

}  // namespace

// Integral LLL in Gram form (Cohen, Alg. 2.6.7), all quantities exact integers.
IntMatrix lll_gram_transform(const RatMatrix& gram, const Rational& delta) {
  if (delta <= Rational(1, 4) || delta >= 1) throw InputError("LLL delta must lie in (1/4, 1)");
  if (!gram.is_symmetric()) throw InputError("LLL: gram matrix is not symmetric");
  const std::size_t n = gram.rows();
  IntMatrix h = IntMatrix::identity(n);
  if (n <= 1) return h;

  Integer den = common_denominator(gram);
  // 1-indexed working copies.
  std::vector<std::vector<Integer>> g(n + 1, std::vector<Integer>(n + 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i + 1][j + 1] = Rational(gram(i, j) * den).get_num();
  std::vector<std::vector<Integer>> hh(n + 1, std::vector<Integer>(n + 1));
  for (std::size_t i = 1; i <= n; ++i) hh[i][i] = 1;
  std::vector<std::vector<Integer>> lam(n + 1, std::vector<Integer>(n + 1));
  std::vector<Integer> d(n + 1);
  const Integer da = delta.get_num(), db = delta.get_den();

  auto red = [&](std::size_t k, std::size_t l) {
    if (abs(2 * lam[k][l]) <= d[l]) return;
    Integer q = round_div(lam[k][l], d[l]);
    for (std::size_t j = 1; j <= n; ++j) g[k][j] -= q * g[l][j];
    for (std::size_t i = 1; i <= n; ++i) g[i][k] -= q * g[i][l];
    for (std::size_t j = 1; j <= n; ++j) hh[k][j] -= q * hh[l][j];
    lam[k][l] -= q * d[l];
    for (std::size_t i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
  };

  std::size_t kmax = 1;
  d[0] = 1;
  d[1] = g[1][1];
  if (d[1] <= 0) throw InputError("LLL: gram matrix is not positive definite");
  auto swap_step = [&](std::size_t k) {
    std::swap(g[k], g[k - 1]);
    for (std::size_t i = 1; i <= n; ++i) std::swap(g[i][k], g[i][k - 1]);
    std::swap(hh[k], hh[k - 1]);
    for (std::size_t j = 1; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    Integer l = lam[k][k - 1];
    Integer b = (d[k - 2] * d[k] + l * l) / d[k - 1];
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      Integer t = lam[i][k];
      lam[i][k] = (d[k] * lam[i][k - 1] - l * t) / d[k - 1];
      lam[i][k - 1] = (b * t + l * lam[i][k]) / d[k];
    }
    d[k - 1] = b;
  };

  std::size_t k = 2;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 1; j <= k; ++j) {
        Integer u = g[k][j];
        for (std::size_t i = 1; i < j; ++i) u = (d[i] * u - lam[k][i] * lam[j][i]) / d[i - 1];
        if (j < k) {
          lam[k][j] = u;
        } else {
          d[k] = u;
          if (u <= 0) throw InputError("LLL: gram matrix is not positive definite");
        }
      }
    }
    while (true) {
      red(k, k - 1);
      if (db * d[k] * d[k - 2] < da * d[k - 1] * d[k - 1] - db * lam[k][k - 1] * lam[k][k - 1]) {
        swap_step(k);
        if (k > 2) --k;
        continue;
      }
      for (std::size_t l = k - 1; l-- > 1;) red(k, l);
      ++k;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = hh[i + 1][j + 1];
  return h;
}

LllResult lll_reduce(const Lattice& l, const Rational& delta) {
  IntMatrix t = lll_gram_transform(l.gram(), delta);
  RatMatrix basis = to_rational(t) * l.basis();
  return LllResult{l.with_basis(std::move(basis)), std::move(t)};
}

bool is_lll_reduced(const RatMatrix& gram, const Rational& delta) {
  const std::size_t n = gram.rows();
  RatMatrix mu(n, n);
  RatVector bstar(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational s = gram(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= mu(j, k) * mu(i, k) * bstar[k];
      mu(i, j) = s / bstar[j];
    }
    Rational s = gram(i, i);
    for (std::size_t k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * bstar[k];
    bstar[i] = s;
    if (s <= 0) return false;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (abs(mu(i, j)) > Rational(1, 2)) return false;
  for (std::size_t k = 1; k < n; ++k)
    if (bstar[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar[k - 1]) return false;
  return true;
}

}  // namespace latt
