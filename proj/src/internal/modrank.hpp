#pragma once

#include <cstdint>
#include <vector>

namespace latt::internal {

// Row echelon form modulo the prime 2^31 - 1. Independence mod p implies
// independence over Q, so this is a safe filter for choosing independent rows.
class ModEchelon {
 public:
  static constexpr std::int64_t prime = 2147483647;

  explicit ModEchelon(std::size_t n) : n_(n) {}
  std::size_t rank() const { return rows_.size(); }

  // Adds v if it is independent of the stored rows.
  bool add(const std::vector<std::int64_t>& v) {
    std::vector<std::int64_t> r = reduce(v);
    std::size_t p = 0;
    while (p < n_ && r[p] == 0) ++p;
    if (p == n_) return false;
    std::int64_t inv = power(r[p], prime - 2);
    for (auto& x : r) x = mulmod(x, inv);
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

  bool independent(const std::vector<std::int64_t>& v) const {
    auto r = reduce(v);
    for (auto x : r)
      if (x != 0) return true;
    return false;
  }

 private:
  static std::int64_t mulmod(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % prime);
  }
  static std::int64_t power(std::int64_t a, std::int64_t e) {
    std::int64_t r = 1;
    while (e > 0) {
      if (e & 1) r = mulmod(r, a);
      a = mulmod(a, a);
      e >>= 1;
    }
    return r;
  }
  std::vector<std::int64_t> reduce(const std::vector<std::int64_t>& v) const {
    std::vector<std::int64_t> r(n_);
    for (std::size_t i = 0; i < n_; ++i) r[i] = ((v[i] % prime) + prime) % prime;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      std::int64_t f = r[pivots_[k]];
      if (f == 0) continue;
      for (std::size_t i = 0; i < n_; ++i) r[i] = ((r[i] - mulmod(f, rows_[k][i])) % prime + prime) % prime;
    }
    return r;
  }

  std::size_t n_;
  std::vector<std::vector<std::int64_t>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace latt::internal
