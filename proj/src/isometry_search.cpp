#include <algorithm>
#include <map>
#include <unordered_map>

#include "internal/modrank.hpp"
#include "latt/isomgroup.hpp"

namespace latt {

namespace {

using i128 = __int128;

// Norm plus the histogram of inner products against the whole vector set.
using Fingerprint = std::vector<std::int64_t>;

Fingerprint fingerprint(const VectorSet& s, std::size_t i) {
  std::vector<std::int64_t> ips(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) ips[j] = s.inner(i, j);
  std::sort(ips.begin(), ips.end());
  Fingerprint f{s.inner(i, i)};
  for (std::size_t k = 0; k < ips.size();) {
    std::size_t e = k;
    while (e < ips.size() && ips[e] == ips[k]) ++e;
    f.push_back(ips[k]);
    f.push_back(static_cast<std::int64_t>(e - k));
    k = e;
  }
  return f;
}

// Backtracking over images of a base of A inside B.
class Matcher {
 public:
  Matcher(const VectorSet& a, const VectorSet& b, const EnumOptions& opts)
      : a_(a), b_(b), n_(a.lattice().rank()), budget_(opts.node_budget) {
    std::map<Fingerprint, std::uint32_t> ids;
    auto classify = [&](const VectorSet& s, std::vector<std::uint32_t>& out) {
      out.resize(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto [it, inserted] = ids.emplace(fingerprint(s, i), static_cast<std::uint32_t>(ids.size()));
        out[i] = it->second;
      }
    };
    classify(a_, fa_);
    if (&a == &b)
      fb_ = fa_;
    else
      classify(b_, fb_);
    choose_base();
    build_closures();
    refine_ = a_.size() <= kRefineLimit;
    if (refine_) build_refinement();
    cand_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t w = 0; w < b_.size(); ++w)
        if (fb_[w] == fa_[base_[k]]) cand_[k].push_back(static_cast<std::uint32_t>(w));
  }

  std::size_t rank() const { return n_; }
  const std::vector<std::uint32_t>& base() const { return base_; }
  const std::vector<std::uint32_t>& candidates(std::size_t k) const { return cand_[k]; }
  std::uint64_t nodes() const { return nodes_; }

  // Image w for base vector k is compatible with the images img[0..k-1].
  bool accept(std::size_t k, std::uint32_t w, std::vector<std::uint32_t>& img) {
    if (++nodes_ > budget_) throw BudgetExhausted("isometry search exceeded the node budget");
    if (refine_ && bcls_[k][w] != acls_[k][base_[k]]) return false;
    for (std::size_t j = 0; j < k; ++j)
      if (b_.inner(w, img[j]) != ip_[k][j]) return false;
    img[k] = w;
    if (!closure_ok(k, img)) return false;
    return !refine_ || refine_b(k, w);
  }

  // Recomputes the refined partitions of B for images img[0..k-1].
  void prime(std::size_t k, const std::vector<std::uint32_t>& img) {
    if (!refine_) return;
    for (std::size_t j = 0; j < k; ++j)
      if (!refine_b(j, img[j])) throw VerificationFailure("isometry search: inconsistent base prefix");
  }

  // Depth-first search from level k; on_leaf receives the matrix and returns true to stop.
  template <class Leaf>
  bool search(std::size_t k, std::vector<std::uint32_t>& img, Leaf&& on_leaf) {
    if (k == n_) {
      auto g = leaf_matrix(img);
      return g && on_leaf(*g);
    }
    for (auto w : cand_[k]) {
      if (!accept(k, w, img)) continue;
      if (search(k + 1, img, on_leaf)) return true;
    }
    return false;
  }

  std::optional<IntMatrix> leaf_matrix(const std::vector<std::uint32_t>& img) const {
    RatMatrix im(n_, n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) im(r, c) = static_cast<long>(b_[img[r]][c]);
    RatMatrix g = pinv_ * im;
    if (!is_integral(g)) return std::nullopt;
    return to_integer(g);
  }

 private:
  void choose_base() {
    internal::ModEchelon ech(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t best = a_.size(), best_score = SIZE_MAX, examined = 0;
      for (std::size_t i = 0; i < a_.size() && examined < 256; ++i) {
        if (!ech.independent(a_[i])) continue;
        ++examined;
        std::size_t score = 0;
        for (std::size_t w = 0; w < a_.size() && score < best_score; ++w) {
          if (fa_[w] != fa_[i]) continue;
          bool ok = true;
          for (std::size_t j = 0; j < k && ok; ++j) ok = a_.inner(w, base_[j]) == a_.inner(i, base_[j]);
          if (ok) ++score;
        }
        if (score < best_score) {
          best_score = score;
          best = i;
        }
      }
      if (best == a_.size()) throw VerificationFailure("isometry search: no independent base vector found");
      ech.add(a_[best]);
      base_.push_back(static_cast<std::uint32_t>(best));
    }
    ip_.assign(n_, std::vector<std::int64_t>(n_));
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t j = 0; j < n_; ++j) ip_[k][j] = a_.inner(base_[k], base_[j]);
    RatMatrix p(n_, n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) p(r, c) = static_cast<long>(a_[base_[r]][c]);
    pinv_ = inverse(p);
  }

  // Every vector of A is a rational combination of the base; it becomes checkable
  // at the level of its last nonzero coefficient.
  void build_closures() {
    closure_.assign(n_, {});
    std::vector<bool> is_base(a_.size(), false);
    for (auto b : base_) is_base[b] = true;
    for (std::size_t w = 0; w < a_.size(); ++w) {
      if (is_base[w]) continue;
      RatVector x(n_);
      for (std::size_t c = 0; c < n_; ++c) x[c] = static_cast<long>(a_[w][c]);
      RatVector coef = x * pinv_;
      Integer den = common_denominator(coef);
      Closure cl;
      cl.w = static_cast<std::uint32_t>(w);
      cl.den = den.get_si();
      std::size_t level = 0;
      for (std::size_t j = 0; j < n_; ++j) {
        Integer num = Rational(coef[j] * den).get_num();
        if (!fits_int64(num) || abs(num) > (Integer(1) << 30)) {
          cl.num.clear();
          break;
        }
        cl.num.push_back(num.get_si());
        if (num != 0) level = j;
      }
      if (cl.num.empty() || !den.fits_slong_p()) continue;  // too large to check cheaply; the leaf test still applies
      closure_[level].push_back(std::move(cl));
    }
  }

  // Vectors are classed by their fingerprint and inner products with base[0..k-1];
  // an image prefix must induce classes of the same sizes in B.
  struct PairHash {
    std::size_t operator()(const std::pair<std::uint32_t, std::int64_t>& p) const {
      return std::hash<std::int64_t>()(p.second * 1000003 + p.first);
    }
  };
  using ClassMap = std::unordered_map<std::pair<std::uint32_t, std::int64_t>, std::uint32_t, PairHash>;

  void build_refinement() {
    acls_.assign(n_ + 1, {});
    acount_.assign(n_ + 1, {});
    amap_.assign(n_, {});
    acls_[0] = fa_;
    bcls_.assign(n_ + 1, std::vector<std::uint32_t>(b_.size()));
    bcls_[0] = fb_;
    for (std::size_t k = 0; k < n_; ++k) {
      acls_[k + 1].resize(a_.size());
      for (std::size_t v = 0; v < a_.size(); ++v) {
        auto key = std::make_pair(acls_[k][v], a_.inner(v, base_[k]));
        auto [it, inserted] = amap_[k].emplace(key, static_cast<std::uint32_t>(amap_[k].size()));
        acls_[k + 1][v] = it->second;
      }
      acount_[k + 1].assign(amap_[k].size(), 0);
      for (auto c : acls_[k + 1]) ++acount_[k + 1][c];
    }
    count_.resize(a_.size() + 1);
  }

  bool refine_b(std::size_t k, std::uint32_t w) {
    const auto& prev = bcls_[k];
    auto& next = bcls_[k + 1];
    const auto& map = amap_[k];
    const auto& want = acount_[k + 1];
    std::fill(count_.begin(), count_.begin() + static_cast<std::ptrdiff_t>(want.size()), 0);
    for (std::size_t v = 0; v < b_.size(); ++v) {
      auto it = map.find(std::make_pair(prev[v], b_.inner(v, w)));
      if (it == map.end()) return false;
      next[v] = it->second;
      if (++count_[it->second] > want[it->second]) return false;
    }
    return true;
  }

  bool closure_ok(std::size_t k, const std::vector<std::uint32_t>& img) const {
    std::vector<std::int64_t> v(n_);
    for (const auto& cl : closure_[k]) {
      for (std::size_t c = 0; c < n_; ++c) {
        i128 s = 0;
        for (std::size_t j = 0; j <= k; ++j)
          if (cl.num[j] != 0) s += static_cast<i128>(cl.num[j]) * b_[img[j]][c];
        if (s % cl.den != 0) return false;
        v[c] = static_cast<std::int64_t>(s / cl.den);
      }
      auto hit = b_.find(v);
      if (!hit || fb_[*hit] != fa_[cl.w]) return false;
    }
    return true;
  }

  struct Closure {
    std::uint32_t w;
    std::vector<std::int64_t> num;
    std::int64_t den;
  };

  const VectorSet& a_;
  const VectorSet& b_;
  std::size_t n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::uint32_t> fa_, fb_;
  std::vector<std::uint32_t> base_;
  std::vector<std::vector<std::int64_t>> ip_;
  RatMatrix pinv_;
  std::vector<std::vector<Closure>> closure_;
  std::vector<std::vector<std::uint32_t>> cand_;
  static constexpr std::size_t kRefineLimit = 60000;
  bool refine_ = false;
  std::vector<std::vector<std::uint32_t>> acls_, bcls_;
  std::vector<std::vector<std::uint32_t>> acount_;
  std::vector<ClassMap> amap_;
  std::vector<std::uint32_t> count_;
};

// Orbit of point under the permutations, as a membership mask.
void mark_orbit(std::uint32_t point, const std::vector<const Perm*>& gens, std::vector<char>& mask) {
  if (mask[point]) return;
  std::vector<std::uint32_t> stack{point};
  mask[point] = 1;
  while (!stack.empty()) {
    std::uint32_t p = stack.back();
    stack.pop_back();
    for (const Perm* g : gens) {
      std::uint32_t q = (*g)[p];
      if (!mask[q]) {
        mask[q] = 1;
        stack.push_back(q);
      }
    }
  }
}

Perm perm_from_matrix(const VectorSet& s, const IntMatrix& g) {
  const std::size_t n = g.rows();
  std::vector<std::vector<std::int64_t>> gm(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gm[i][j] = to_int64(g(i, j));
  Perm p(s.size());
  std::vector<std::int64_t> w(n);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      i128 t = 0;
      for (std::size_t k = 0; k < n; ++k) t += static_cast<i128>(s[i][k]) * gm[k][j];
      w[j] = static_cast<std::int64_t>(t);
    }
    auto hit = s.find(w);
    if (!hit) throw VerificationFailure("automorphism does not permute the short vectors");
    p[i] = *hit;
  }
  return p;
}

}  // namespace

IsometryGroup automorphism_group(const Lattice& l, AutStats& stats, std::optional<Rational> depth_norm,
                                 const EnumOptions& opts) {
  Rational depth = depth_norm ? *depth_norm : spanning_depth(l, opts);
  VectorSet s(l, depth, opts);
  if (!s.spans()) throw InputError("short vectors up to the depth norm do not span the lattice");
  Matcher m(s, s, opts);
  const std::size_t n = m.rank();
  const auto& base = m.base();

  // level_gens[k]: generators found while computing the orbit of base[k]; they fix base[0..k-1].
  std::vector<std::vector<Perm>> level_gens(n);
  std::vector<IntMatrix> matrices;
  std::vector<std::size_t> orbit_len(n, 1);
  Integer order = 1;
  std::vector<std::uint32_t> img(n);
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = 0; j < k; ++j) img[j] = base[j];
    auto gens_from = [&](std::size_t lvl) {
      std::vector<const Perm*> out;
      for (std::size_t t = lvl; t < n; ++t)
        for (const auto& g : level_gens[t]) out.push_back(&g);
      return out;
    };
    m.prime(k, img);
    std::vector<char> orbit(s.size(), 0), impossible(s.size(), 0);
    mark_orbit(base[k], gens_from(k), orbit);
    for (auto w : m.candidates(k)) {
      if (orbit[w] || impossible[w]) continue;
      if (!m.accept(k, w, img)) continue;
      std::optional<IntMatrix> found;
      m.search(k + 1, img, [&](const IntMatrix& g) {
        found = g;
        return true;
      });
      if (found) {
        level_gens[k].push_back(perm_from_matrix(s, *found));
        matrices.push_back(*found);
        std::fill(orbit.begin(), orbit.end(), 0);
        mark_orbit(base[k], gens_from(k), orbit);
      } else {
        mark_orbit(w, gens_from(k), impossible);
      }
    }
    orbit_len[k] = static_cast<std::size_t>(std::count(orbit.begin(), orbit.end(), 1));
    order *= static_cast<unsigned long>(orbit_len[k]);
  }
  stats.nodes = m.nodes();
  stats.orbit_lengths = orbit_len;

  IsometryGroup g(l, matrices, depth);
  if (g.order() != order)
    throw VerificationFailure("automorphism group order disagrees with the Schreier-Sims cross-check");
  return g;
}

IsometryGroup automorphism_group(const Lattice& l, std::optional<Rational> depth_norm, const EnumOptions& opts) {
  AutStats stats;
  return automorphism_group(l, stats, depth_norm, opts);
}

std::optional<Isometry> is_isometric(const Lattice& l1, const Lattice& l2, const IsometryGroup* aut2,
                                     const EnumOptions& opts) {
  if (l1.rank() != l2.rank()) return std::nullopt;
  if (determinant(l1) != determinant(l2)) return std::nullopt;
  if (common_denominator(l1.gram()) != common_denominator(l2.gram())) return std::nullopt;
  if (minimum(l1, opts) != minimum(l2, opts)) return std::nullopt;
  Rational depth = spanning_depth(l1, opts);
  if (theta_prefix(l1, depth, opts) != theta_prefix(l2, depth, opts)) return std::nullopt;

  VectorSet s1(l1, depth, opts), s2(l2, depth, opts);
  if (!s2.spans()) return std::nullopt;
  Matcher m(s1, s2, opts);
  const std::size_t n = m.rank();

  std::vector<std::uint32_t> first = m.candidates(0);
  if (aut2 != nullptr) {
    if (!same_lattice(aut2->lattice(), l2) || !(aut2->lattice().basis() == l2.basis()))
      throw InputError("is_isometric: the supplied group does not act on the second lattice");
    std::vector<Perm> gens;
    for (const auto& g : aut2->generators()) gens.push_back(perm_from_matrix(s2, g.matrix()));
    std::vector<const Perm*> ptrs;
    for (const auto& g : gens) ptrs.push_back(&g);
    std::vector<char> seen(s2.size(), 0);
    std::vector<std::uint32_t> reps;
    for (auto w : first) {
      if (seen[w]) continue;
      reps.push_back(w);
      mark_orbit(w, ptrs, seen);
    }
    first = reps;
  }

  std::vector<std::uint32_t> img(n);
  std::optional<IntMatrix> found;
  for (auto w : first) {
    if (!m.accept(0, w, img)) continue;
    if (m.search(1, img, [&](const IntMatrix& g) {
          found = g;
          return true;
        }))
      break;
  }
  if (!found) return std::nullopt;
  return Isometry(l1.gram(), l2.gram(), *found);
}

}  // namespace latt
