#include "latt/shortvec.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace latt {

namespace {

std::atomic<std::uint64_t> g_default_budget{1000000000ULL};

using i128 = __int128;

bool mul_ok(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }
bool add_ok(i128 a, i128 b, i128& out) { return !__builtin_add_overflow(a, b, &out); }

Integer to_integer128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(u >> 64));
  Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

enum class Mode { collect, below, minimum };

struct Hit {
  Integer n;  // scaled exact norm
  std::vector<std::int64_t> coords;
};

}  // namespace

std::uint64_t default_node_budget() { return g_default_budget.load(); }
void set_default_node_budget(std::uint64_t budget) { g_default_budget.store(budget); }

struct ShortVectorEngine::Impl {
  Lattice original;
  Lattice red;
  IntMatrix transform;
  std::size_t n = 0;
  Integer scale;                            // scale * gram is integral
  IntMatrix gi;                             // scale * reduced gram
  std::vector<std::int64_t> gi64;           // row-major copy when it fits
  bool gi_fits = false;
  std::vector<std::vector<std::int64_t>> t64;  // reduced -> original coordinates
  std::vector<long double> diag;           // Cholesky diagonal q_ii
  std::vector<std::vector<long double>> mu;  // q_ij for j > i

  explicit Impl(const Lattice& l) : original(l), red(l), n(l.rank()) {
    LllResult r = lll_reduce(l);
    red = r.lattice;
    transform = r.transform;
    const RatMatrix& g = red.gram();
    scale = common_denominator(g);
    gi = IntMatrix(n, n);
    gi_fits = true;
    gi64.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        gi(i, j) = Rational(g(i, j) * scale).get_num();
        if (fits_int64(gi(i, j)) && abs(gi(i, j)) < (Integer(1) << 40))
          gi64[i * n + j] = to_int64(gi(i, j));
        else
          gi_fits = false;
      }
    t64.assign(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t64[i][j] = to_int64(transform(i, j));

    // Exact Cholesky (Cohen 2.7.6): Q(x) = sum q_ii (x_i + sum_{j>i} q_ij x_j)^2.
    RatMatrix q = g;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        q(j, i) = q(i, j);
        q(i, j) = q(i, j) / q(i, i);
      }
      for (std::size_t k = i + 1; k < n; ++k)
        for (std::size_t l2 = k; l2 < n; ++l2) q(k, l2) -= q(k, i) * q(i, l2);
    }
    diag.resize(n);
    mu.assign(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] = static_cast<long double>(q(i, i).get_d());
      if (!(diag[i] > 0)) throw InputError("short vectors: gram matrix is not positive definite");
      for (std::size_t j = i + 1; j < n; ++j) mu[i][j] = to_ld(q(i, j));
    }
  }

  static long double to_ld(const Rational& r) {
    // get_d loses nothing that matters for pruning; the exact check happens at leaves.
    return static_cast<long double>(r.get_d());
  }

  // z G z^T for integer z, exactly.
  Integer exact_norm(const std::vector<std::int64_t>& z) const {
    if (gi_fits) {
      i128 acc = 0;
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        if (z[i] == 0) continue;
        i128 row = 0;
        for (std::size_t j = 0; j < n && ok; ++j) {
          if (z[j] == 0) continue;
          i128 t;
          ok = mul_ok(static_cast<i128>(gi64[i * n + j]), static_cast<i128>(z[j]), t) && add_ok(row, t, row);
        }
        i128 t;
        ok = ok && mul_ok(row, static_cast<i128>(z[i]), t) && add_ok(acc, t, acc);
      }
      if (ok) return to_integer128(acc);
    }
    Integer acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (z[i] == 0) continue;
      Integer row = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (z[j] != 0) row += gi(i, j) * Integer(static_cast<long>(z[j]));
      acc += row * Integer(static_cast<long>(z[i]));
    }
    return acc;
  }

  std::vector<std::int64_t> to_original(const std::vector<std::int64_t>& y) const {
    std::vector<std::int64_t> x(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      i128 s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (y[i] == 0) continue;
        i128 t;
        if (!mul_ok(static_cast<i128>(y[i]), static_cast<i128>(t64[i][j]), t) || !add_ok(s, t, s))
          throw InputError("short vector coordinates overflow 64 bits");
      }
      if (s > INT64_MAX || s < INT64_MIN) throw InputError("short vector coordinates overflow 64 bits");
      x[j] = static_cast<std::int64_t>(s);
    }
    return x;
  }

  // Shared traversal state for one query.
  struct Query {
    Mode mode = Mode::collect;
    bool lattice_mode = true;          // half-space, zero excluded
    std::vector<std::int64_t> tnum;    // shift numerators (denominator dt), in [0, dt)
    std::vector<long double> tt;       // shift as reals
    std::vector<std::int64_t> offset;  // floor of the shift coordinates
    std::int64_t dt = 1;
    Integer weight;                    // scale * dt^2, exact norm = N / weight
    Integer bound_n;                   // scaled bound (collect / below / current min)
    long double bound_f = 0;
    std::uint64_t budget = 0;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::mutex mutex;                  // guards minimum updates and callbacks
    const std::function<void(const ShortVector&)>* emit = nullptr;
    bool keep = true;
    bool found = false;
  };

  struct Worker {
    const Impl& impl;
    Query& q;
    std::vector<std::int64_t> y;
    std::vector<long double> z;  // y + t
    std::vector<Hit> hits;
    std::optional<Integer> best_n;
    std::uint64_t best_count = 0;
    std::uint64_t total = 0;
    std::uint64_t local_nodes = 0;

    Worker(const Impl& i, Query& qq) : impl(i), q(qq), y(i.n, 0), z(i.n, 0.0L) {}

    void flush_nodes() {
      std::uint64_t t = q.nodes.fetch_add(local_nodes) + local_nodes;
      local_nodes = 0;
      if (t > q.budget) {
        q.stop = true;
        throw BudgetExhausted("short vector enumeration exceeded the node budget");
      }
    }

    long double slack() const {
      long double b = q.bound_f;
      return 1e-9L * (b > 1 ? b : 1.0L);
    }

    void leaf() {
      std::vector<std::int64_t> zi(impl.n);
      for (std::size_t i = 0; i < impl.n; ++i) zi[i] = q.dt * y[i] + q.tnum[i];
      Integer nn = impl.exact_norm(zi);
      switch (q.mode) {
        case Mode::below:
          if (nn < q.bound_n) {
            q.found = true;
            q.stop = true;
          }
          return;
        case Mode::minimum: {
          if (nn < q.bound_n) {
            q.bound_n = nn;
            q.bound_f = static_cast<long double>(make_rational(nn, q.weight).get_d());
          }
          return;
        }
        case Mode::collect:
          break;
      }
      if (nn > q.bound_n) return;
      ++total;
      if (!best_n || nn < *best_n) {
        best_n = nn;
        best_count = 1;
      } else if (nn == *best_n) {
        ++best_count;
      }
      if (!q.keep && !*q.emit) return;
      std::vector<std::int64_t> yy(impl.n);
      for (std::size_t i = 0; i < impl.n; ++i) yy[i] = y[i] - q.offset[i];
      std::vector<std::int64_t> x = impl.to_original(yy);
      if (q.lattice_mode) {
        auto it = std::find_if(x.begin(), x.end(), [](std::int64_t v) { return v != 0; });
        if (it != x.end() && *it < 0)
          for (auto& v : x) v = -v;
      }
      if (*q.emit) {
        std::lock_guard<std::mutex> lock(q.mutex);
        (*q.emit)(ShortVector{x, make_rational(nn, q.weight)});
      }
      if (q.keep) hits.push_back(Hit{nn, std::move(x)});
    }

    // used = contribution of levels above i.
    void level(std::size_t i, long double used, bool all_zero_above) {
      long double c = -q.tt[i];
      for (std::size_t j = i + 1; j < impl.n; ++j) c -= impl.mu[i][j] * z[j];
      long double room = q.bound_f + slack() - used;
      if (room < 0) return;
      long double r = std::sqrt(room / impl.diag[i]);
      long double lo_f = std::ceil(c - r), hi_f = std::floor(c + r);
      if (hi_f < lo_f) return;
      if (lo_f < -9.0e18L || hi_f > 9.0e18L) throw InputError("short vector search range overflow");
      std::int64_t lo = static_cast<std::int64_t>(lo_f), hi = static_cast<std::int64_t>(hi_f);
      if (q.lattice_mode && all_zero_above) {
        lo = std::max<std::int64_t>(lo, i == 0 ? 1 : 0);
        if (hi < lo) return;
      }
      // Zig-zag from the center so minimum searches shrink early.
      std::int64_t start = static_cast<std::int64_t>(std::llround(c));
      start = std::clamp(start, lo, hi);
      for (std::int64_t step = 0;; ++step) {
        std::int64_t v;
        bool up_ok = start + step <= hi, down_ok = start - step >= lo;
        if (!up_ok && !down_ok) break;
        for (int side = 0; side < 2; ++side) {
          if (side == 0) {
            if (!up_ok) continue;
            v = start + step;
          } else {
            if (step == 0 || !down_ok) continue;
            v = start - step;
          }
          if (q.stop) return;
          if (++local_nodes >= 4096) flush_nodes();
          long double d = static_cast<long double>(v) - c;
          long double u = used + impl.diag[i] * d * d;
          if (u > q.bound_f + slack()) continue;
          y[i] = v;
          z[i] = static_cast<long double>(v) + q.tt[i];
          if (i == 0)
            leaf();
          else
            level(i - 1, u, all_zero_above && v == 0);
          if (q.stop) {
            y[i] = 0;
            z[i] = q.tt[i];
            return;
          }
        }
      }
      y[i] = 0;
      z[i] = q.tt[i];
    }
  };

  void setup_shift(Query& q, const AmbientVector* shift) const {
    q.tnum.assign(n, 0);
    q.tt.assign(n, 0.0L);
    q.offset.assign(n, 0);
    q.lattice_mode = shift == nullptr;
    if (shift) {
      auto t = red.coordinates(*shift);
      if (!t) throw InputError("coset shift is outside the rational span of the lattice");
      Integer dt = common_denominator(*t);
      if (!fits_int64(dt) || dt > (Integer(1) << 30)) throw InputError("coset shift denominator too large");
      q.dt = to_int64(dt);
      for (std::size_t i = 0; i < n; ++i) {
        Integer fl = floor((*t)[i]);
        q.offset[i] = to_int64(fl);  // enumerated y' = y + floor(t)
        Rational f = (*t)[i] - Rational(fl);
        q.tnum[i] = to_int64(Rational(f * dt).get_num());
        q.tt[i] = static_cast<long double>(f.get_d());
      }
    }
    q.weight = scale * Integer(static_cast<long>(q.dt)) * Integer(static_cast<long>(q.dt));
  }

  void set_bound(Query& q, const Rational& bound) const {
    Rational b = bound * Rational(q.weight);
    q.bound_n = floor(b);
    q.bound_f = static_cast<long double>(bound.get_d());
  }

  void run(Query& q, unsigned jobs, std::vector<Worker>& workers) const {
    if (jobs <= 1 || n < 2 || q.mode != Mode::collect) {
      workers.emplace_back(*this, q);
      Worker& w = workers.back();
      for (std::size_t i = 0; i < n; ++i) w.z[i] = q.tt[i];
      w.level(n - 1, 0.0L, true);
      w.flush_nodes();
      return;
    }
    // Split on the top coordinate.
    const std::size_t top = n - 1;
    long double c = -q.tt[top];
    long double r = std::sqrt((q.bound_f + 1e-9L * std::max<long double>(q.bound_f, 1)) / diag[top]);
    std::int64_t lo = static_cast<std::int64_t>(std::ceil(c - r));
    std::int64_t hi = static_cast<std::int64_t>(std::floor(c + r));
    if (q.lattice_mode) lo = std::max<std::int64_t>(lo, 0);
    std::vector<std::int64_t> values;
    for (std::int64_t v = lo; v <= hi; ++v) values.push_back(v);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    workers.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) workers.emplace_back(*this, q);
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) {
      threads.emplace_back([&, t] {
        Worker& w = workers[t];
        try {
          for (std::size_t k; (k = next.fetch_add(1)) < values.size();) {
            if (q.stop) break;
            for (std::size_t i = 0; i < n; ++i) w.z[i] = q.tt[i];
            std::int64_t v = values[k];
            long double d = static_cast<long double>(v) - c;
            long double u = diag[top] * d * d;
            ++w.local_nodes;
            if (u > q.bound_f + w.slack()) continue;
            w.y[top] = v;
            w.z[top] = static_cast<long double>(v) + q.tt[top];
            w.level(top - 1, u, v == 0);
            w.y[top] = 0;
          }
          w.flush_nodes();
        } catch (...) {
          errors[t] = std::current_exception();
          q.stop = true;
        }
      });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  ShortVectorReport collect(const Rational& bound, const AmbientVector* shift, const EnumOptions& opts,
                            const std::function<void(const ShortVector&)>& emit) const {
    if (bound < 0) throw InputError("norm bound must be non-negative");
    Query q;
    q.mode = Mode::collect;
    q.budget = opts.node_budget;
    q.keep = opts.keep_vectors;
    q.emit = &emit;
    setup_shift(q, shift);
    set_bound(q, bound);
    std::vector<Worker> workers;
    run(q, std::max(1u, opts.jobs), workers);

    ShortVectorReport rep;
    rep.bound = bound;
    rep.nodes = q.nodes.load();
    std::optional<Integer> best;
    std::uint64_t best_count = 0;
    std::vector<Hit> all;
    for (auto& w : workers) {
      rep.count += w.total;
      if (w.best_n) {
        if (!best || *w.best_n < *best) {
          best = w.best_n;
          best_count = w.best_count;
        } else if (*w.best_n == *best) {
          best_count += w.best_count;
        }
      }
      for (auto& h : w.hits) all.push_back(std::move(h));
    }
    if (best) {
      rep.minimum = make_rational(*best, q.weight);
      rep.kissing = q.lattice_mode ? 2 * best_count : best_count;
    }
    std::sort(all.begin(), all.end(), [](const Hit& a, const Hit& b) {
      if (a.n != b.n) return a.n < b.n;
      return a.coords < b.coords;
    });
    rep.vectors.reserve(all.size());
    for (auto& h : all) rep.vectors.push_back(ShortVector{std::move(h.coords), make_rational(h.n, q.weight)});
    return rep;
  }

  bool below(const Rational& bound, const EnumOptions& opts) const {
    if (bound <= 0) return false;
    Query q;
    q.mode = Mode::below;
    q.budget = opts.node_budget;
    setup_shift(q, nullptr);
    Rational b = bound * Rational(q.weight);
    q.bound_n = is_integer(b) ? b.get_num() : floor(b) + 1;  // N < bound_n  <=>  norm < bound
    q.bound_f = static_cast<long double>(bound.get_d());
    std::vector<Worker> workers;
    run(q, 1, workers);
    return q.found;
  }

  Rational min_search(const AmbientVector* shift, const EnumOptions& opts) const {
    Query q;
    q.mode = Mode::minimum;
    q.budget = opts.node_budget;
    setup_shift(q, shift);
    if (!shift) {
      Integer best = gi(0, 0);
      for (std::size_t i = 1; i < n; ++i) best = std::min<Integer>(best, gi(i, i));
      q.bound_n = best;
    } else {
      // Babai nearest plane gives a starting upper bound.
      std::vector<std::int64_t> y(n, 0);
      std::vector<long double> z(n);
      for (std::size_t ii = n; ii-- > 0;) {
        long double c = -q.tt[ii];
        for (std::size_t j = ii + 1; j < n; ++j) c -= mu[ii][j] * z[j];
        y[ii] = static_cast<std::int64_t>(std::llround(c));
        z[ii] = static_cast<long double>(y[ii]) + q.tt[ii];
      }
      std::vector<std::int64_t> zi(n);
      for (std::size_t i = 0; i < n; ++i) zi[i] = q.dt * y[i] + q.tnum[i];
      q.bound_n = exact_norm(zi);
    }
    q.bound_f = static_cast<long double>(make_rational(q.bound_n, q.weight).get_d());
    std::vector<Worker> workers;
    run(q, 1, workers);
    return make_rational(q.bound_n, q.weight);
  }
};

ShortVectorEngine::ShortVectorEngine(const Lattice& l) : impl_(std::make_unique<Impl>(l)) {}
ShortVectorEngine::~ShortVectorEngine() = default;
ShortVectorEngine::ShortVectorEngine(ShortVectorEngine&&) noexcept = default;
ShortVectorEngine& ShortVectorEngine::operator=(ShortVectorEngine&&) noexcept = default;

const Lattice& ShortVectorEngine::lattice() const { return impl_->original; }
const Lattice& ShortVectorEngine::reduced() const { return impl_->red; }
const IntMatrix& ShortVectorEngine::transform() const { return impl_->transform; }

ShortVectorReport ShortVectorEngine::enumerate(const Rational& bound, const EnumOptions& opts,
                                               const std::function<void(const ShortVector&)>& emit) const {
  return impl_->collect(bound, nullptr, opts, emit);
}

bool ShortVectorEngine::has_vector_below(const Rational& bound, const EnumOptions& opts) const {
  return impl_->below(bound, opts);
}

Rational ShortVectorEngine::minimum(const EnumOptions& opts) const { return impl_->min_search(nullptr, opts); }

ShortVectorReport ShortVectorEngine::coset(const AmbientVector& shift, const Rational& bound,
                                           const EnumOptions& opts) const {
  return impl_->collect(bound, &shift, opts, {});
}

Rational ShortVectorEngine::coset_minimum(const AmbientVector& shift, const EnumOptions& opts) const {
  return impl_->min_search(&shift, opts);
}

ShortVectorReport enumerate_short(const Lattice& l, const Rational& bound, const EnumOptions& opts,
                                  const std::function<void(const ShortVector&)>& emit) {
  return ShortVectorEngine(l).enumerate(bound, opts, emit);
}

bool has_vector_below(const Lattice& l, const Rational& bound, const EnumOptions& opts) {
  return ShortVectorEngine(l).has_vector_below(bound, opts);
}

Rational minimum(const Lattice& l, const EnumOptions& opts) { return ShortVectorEngine(l).minimum(opts); }

std::uint64_t kissing_number(const Lattice& l, const EnumOptions& opts) {
  ShortVectorEngine e(l);
  Rational m = e.minimum(opts);
  EnumOptions o = opts;
  o.keep_vectors = false;
  return e.enumerate(m, o).kissing;
}

bool is_extremal_even_unimodular(const Lattice& l) {
  if (!is_even(l) || !is_unimodular(l)) return false;
  return !has_vector_below(l, Rational(extremal_bound(static_cast<int>(l.rank()))));
}

CosetQuery::CosetQuery(Lattice lattice, AmbientVector shift) : lattice_(std::move(lattice)), shift_(std::move(shift)) {
  auto c = lattice_.coordinates(shift_);
  if (!c) throw InputError("coset shift is outside the rational span of the lattice");
  if (is_integral(*c)) throw InputError("coset shift lies in the lattice");
}

Rational coset_minimum(const CosetQuery& q, const EnumOptions& opts) {
  return ShortVectorEngine(q.lattice()).coset_minimum(q.shift(), opts);
}

ShortVectorReport coset_short_vectors(const CosetQuery& q, const Rational& bound, const EnumOptions& opts) {
  return ShortVectorEngine(q.lattice()).coset(q.shift(), bound, opts);
}

std::vector<std::pair<Rational, std::uint64_t>> theta_prefix(const Lattice& l, const Rational& bound,
                                                             const EnumOptions& opts) {
  std::map<Rational, std::uint64_t> counts;
  EnumOptions o = opts;
  o.keep_vectors = false;
  std::function<void(const ShortVector&)> emit = [&](const ShortVector& v) { counts[v.norm] += 2; };
  ShortVectorEngine(l).enumerate(bound, o, emit);
  return {counts.begin(), counts.end()};
}

}  // namespace latt
