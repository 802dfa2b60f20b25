#include <random>

#include "doctest.h"
#include "latt/normal_form.hpp"

using namespace latt;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST_CASE("hermite form is echelon, reduced and row-equivalent") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + trial % 5, c = 1 + (trial / 5) % 5;
    IntMatrix a = random_matrix(rng, r, c, -6, 6);
    HermiteForm hf = hermite_normal_form(a, true);
    REQUIRE(hf.transform.rows() == r);
    CHECK(abs(determinant(hf.transform)) == 1);
    IntMatrix ua = hf.transform * a;
    for (std::size_t i = 0; i < hf.rank; ++i)
      for (std::size_t j = 0; j < c; ++j) CHECK(ua(i, j) == hf.h(i, j));
    for (std::size_t i = hf.rank; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) CHECK(ua(i, j) == 0);
    CHECK(hf.rank == rank(to_rational(a)));
    std::size_t last = 0;
    for (std::size_t i = 0; i < hf.rank; ++i) {
      std::size_t p = 0;
      while (hf.h(i, p) == 0) ++p;
      if (i > 0) CHECK(p > last);
      last = p;
      CHECK(hf.h(i, p) > 0);
      for (std::size_t k = 0; k < i; ++k) {
        CHECK(hf.h(k, p) >= 0);
        CHECK(hf.h(k, p) < hf.h(i, p));
      }
    }
  }
}

TEST_CASE("smith form diagonalizes with divisibility chain") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    IntMatrix a = random_matrix(rng, r, c, -9, 9);
    SmithForm s = smith_normal_form(a);
    CHECK(abs(determinant(s.left)) == 1);
    CHECK(abs(determinant(s.right)) == 1);
    IntMatrix d = s.left * a * s.right;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        if (i == j && i < s.divisors.size())
          CHECK(d(i, j) == s.divisors[i]);
        else
          CHECK(d(i, j) == 0);
      }
    for (std::size_t i = 0; i < s.divisors.size(); ++i) {
      CHECK(s.divisors[i] > 0);
      if (i + 1 < s.divisors.size()) CHECK(s.divisors[i + 1] % s.divisors[i] == 0);
    }
  }
}

TEST_CASE("smith divisors of the A4 gram matrix") {
  IntMatrix g{{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}};
  SmithForm s = smith_normal_form(g);
  CHECK(s.divisors == IntVector{1, 1, 1, 5});
}

TEST_CASE("integer left kernel is exact and saturated") {
  IntMatrix a{{2, 4}, {3, 6}, {1, 2}};
  IntMatrix k = integer_left_kernel(a);
  CHECK(k.rows() == 2);
  IntMatrix z = k * a;
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j) CHECK(z(i, j) == 0);
  // Saturation: the elementary divisors of the kernel basis are all 1.
  SmithForm s = smith_normal_form(k);
  for (const auto& d : s.divisors) CHECK(d == 1);
}
