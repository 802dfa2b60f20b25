#include "latt/gluesearch.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace latt {

namespace {

using json = nlohmann::json;

constexpr std::size_t kOrbitCap = 200000;

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

void render(std::ostringstream& os, const RatMatrix& m) {
  os << m.rows() << 'x' << m.cols() << ':';
  for (const auto& x : m.data()) os << to_string(x) << ',';
  os << ';';
}

void render(std::ostringstream& os, const AmbientVector& v) {
  os << '[';
  for (const auto& x : v) os << to_string(x) << ',';
  os << ']';
}

Rational mod2(const Rational& q) { return mod(q, Rational(2)); }

// Positions in a work item are mapped to frame indices by `order`.
struct WorkItem {
  std::vector<DiscElement> prefix;
  std::size_t anchor = 0;
  std::shared_ptr<const std::vector<std::vector<DiscElement>>> filtered;  // per frame index, empty when unfiltered
  std::vector<std::size_t> order;
};

struct ItemOutcome {
  std::vector<std::vector<DiscElement>> solutions;
  std::uint64_t nodes = 0;
  bool exhausted = false;
  std::vector<std::size_t> sizes;  // candidate list size per depth (0 when not reached)
};

class BudgetCounter {
 public:
  explicit BudgetCounter(std::uint64_t budget) : budget_(budget) {}
  void tick() {
    if (used_.fetch_add(1, std::memory_order_relaxed) + 1 > budget_)
      throw BudgetExhausted("glue search exceeded its node budget");
  }

 private:
  std::uint64_t budget_;
  std::atomic<std::uint64_t> used_{0};
};

}  // namespace

RatMatrix frame_gram(const SearchConfig& c) {
  const std::size_t s = c.glue_rank;
  RatMatrix f(s, s);
  if (!c.left) return f;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) f(i, j) = c.left->inner(c.left_frame[i], c.left_frame[j]);
  return f;
}

void validate(const SearchConfig& c) {
  if (!is_prime(c.p)) throw InputError("glue search: p is not prime");
  if (c.glue_rank == 0) throw InputError("glue search: glue rank must be positive");
  if (c.left_frame.size() != c.glue_rank) throw InputError("glue search: frame length differs from the glue rank");
  if (!is_integral(c.right) || (c.left && !is_integral(*c.left)))
    throw InputError("glue search: factors must be integral");
  DiscriminantGroup db(c.right);
  std::int64_t pb = elementary_prime(db);
  if (pb != c.p) throw InputError("glue search: right discriminant group is not p-elementary");
  if (c.glue_rank > db.rank()) throw InputError("glue search: glue rank exceeds the right discriminant rank");
  if (c.left) {
    DiscriminantGroup da(*c.left);
    if (elementary_prime(da) != c.p) throw InputError("glue search: left discriminant group is not p-elementary");
    if (c.glue_rank > da.rank()) throw InputError("glue search: glue rank exceeds the left discriminant rank");
    std::vector<DiscElement> coords;
    for (const auto& b : c.left_frame) coords.push_back(da.coordinates(b));
    if (echelon_mod_p(coords, c.p).size() != c.glue_rank)
      throw InputError("glue search: frame classes are not independent");
  } else {
    for (const auto& b : c.left_frame)
      if (!b.empty()) throw InputError("glue search: frame vectors given without a left factor");
  }
  if (c.declared_frame_gram && !(*c.declared_frame_gram == frame_gram(c)))
    throw InputError("glue search: declared frame Gram does not match the frame vectors");
  if (c.target_min <= 0) throw InputError("glue search: target minimum must be positive");
}

std::string config_digest(const SearchConfig& c) {
  std::ostringstream os;
  os << "p=" << c.p << ";s=" << c.glue_rank << ";t=" << to_string(c.target_min) << ";";
  if (c.left) {
    os << "A=";
    render(os, c.left->basis());
    render(os, c.left->ambient_form());
  }
  os << "B=";
  render(os, c.right.basis());
  render(os, c.right.ambient_form());
  os << "F=";
  for (const auto& b : c.left_frame) render(os, b);
  os << ";sym=" << (c.symmetry == SymmetryMode::right_aut ? "right_aut" : "none");
  os << ";pin=" << c.pin_first_anchor << ";ssf=" << c.smallest_set_first;
  return fnv1a_hex(os.str());
}

std::vector<DiscElement> echelon_mod_p(std::vector<DiscElement> rows, std::int64_t p) {
  auto inv = [p](std::int64_t a) {
    std::int64_t r = 1, b = a % p, e = p - 2;
    while (e > 0) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  for (auto& r : rows)
    for (auto& x : r) x = ((x % p) + p) % p;
  std::size_t rank = 0;
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    std::int64_t f = inv(rows[rank][col]);
    for (auto& x : rows[rank]) x = x * f % p;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      std::int64_t m = rows[r][col];
      for (std::size_t j = 0; j < n; ++j) rows[r][j] = ((rows[r][j] - m * rows[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  rows.resize(rank);
  return rows;
}

std::vector<std::pair<std::vector<DiscElement>, std::size_t>> subspace_orbits(const DiscriminantAction& action,
                                                                              std::size_t k) {
  const DiscriminantGroup& d = action.disc();
  std::int64_t p = elementary_prime(d);
  if (p == 0 && k > 0) throw InputError("subspace_orbits: discriminant group is not elementary");
  auto spaces = subspaces(d, k);
  auto apply = [&](const std::vector<DiscElement>& basis, std::size_t g) {
    std::vector<DiscElement> img;
    for (const auto& b : basis) img.push_back(action.apply(b, g));
    return echelon_mod_p(img, p == 0 ? 2 : p);
  };
  auto orbits = orbit_partition(spaces, action.generator_count(), apply);
  std::vector<std::pair<std::vector<DiscElement>, std::size_t>> out;
  for (const auto& o : orbits) out.emplace_back(o.front(), o.size());
  return out;
}

struct GlueSearch::Impl {
  SearchConfig cfg;
  RatMatrix f;
  DiscriminantGroup db;
  std::unique_ptr<ClassTable> table;
  std::unique_ptr<IsometryGroup> group;
  std::unique_ptr<DiscriminantAction> act;
  std::vector<Rational> pool_norms;
  std::vector<std::vector<DiscElement>> pools;
  Lattice base;
  Rational base_min;

  explicit Impl(SearchConfig c)
      : cfg(std::move(c)), db(cfg.right), base(cfg.left ? orthogonal_sum(*cfg.left, cfg.right) : cfg.right) {
    validate(cfg);
    f = frame_gram(cfg);
    table = std::make_unique<ClassTable>(db);
    if (cfg.symmetry == SymmetryMode::right_aut)
      group = std::make_unique<IsometryGroup>(automorphism_group(cfg.right));
    else
      group = std::make_unique<IsometryGroup>(cfg.right, std::vector<IntMatrix>{});
    act = std::make_unique<DiscriminantAction>(*group, db);
    base_min = minimum(base);
    const std::vector<DiscElement> all = db.elements();
    for (std::size_t i = 0; i < cfg.glue_rank; ++i) {
      // Least N >= target - F_ii with N = -F_ii mod 2.
      Rational want = mod2(-f(i, i));
      Rational lo = cfg.target_min - f(i, i);
      Rational n = want + Rational(2) * Rational(floor((lo - want) / 2));
      while (n < lo) n += 2;
      while (n - 2 >= lo) n -= 2;
      pool_norms.push_back(n);
      std::vector<DiscElement> cls;
      const Rational q_want = mod(-f(i, i) / 2, Rational(1));
      for (const auto& a : all) {
        if (db.is_zero(a)) continue;
        if (db.quadratic(a) != q_want) continue;
        if (table->minimum(a) != n) continue;
        cls.push_back(a);
      }
      pools.push_back(std::move(cls));
    }
  }

  static std::size_t at(const std::vector<std::size_t>* order, std::size_t k) { return order ? (*order)[k] : k; }

  // b_B(c_k, c_j) + F_kj in Z for all j <= k.
  bool congruent(const std::vector<DiscElement>& prefix, std::size_t k,
                 const std::vector<std::size_t>* order = nullptr) const {
    const std::size_t fk = at(order, k);
    for (std::size_t j = 0; j <= k; ++j) {
      Rational t = db.bilinear(prefix[k], prefix[j]) + f(fk, at(order, j));
      if (!is_integer(t)) return false;
    }
    return is_integer(db.quadratic(prefix[k]) + f(fk, fk) / 2);
  }

  Lattice lattice_of(const std::vector<DiscElement>& prefix, const std::vector<std::size_t>* order = nullptr) const {
    std::vector<GlueVector> gens;
    for (std::size_t j = 0; j < prefix.size(); ++j) {
      AmbientVector b = cfg.left ? cfg.left_frame[at(order, j)] : AmbientVector{};
      gens.push_back({b, table->representative(prefix[j])});
    }
    return overlattice(GlueCode(cfg.left, cfg.right, gens));
  }

  bool survives(const std::vector<DiscElement>& prefix, const std::vector<std::size_t>* order = nullptr) const {
    for (std::size_t k = 0; k < prefix.size(); ++k)
      if (!congruent(prefix, k, order)) return false;
    if (prefix.empty()) return base_min >= cfg.target_min;
    return !has_vector_below(lattice_of(prefix, order), cfg.target_min);
  }

  std::vector<DiscElement> filter(std::size_t i, const std::vector<DiscElement>& anchors) const {
    std::vector<DiscElement> out;
    for (const auto& v : pools[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < anchors.size() && ok; ++j)
        ok = is_integer(db.bilinear(v, anchors[j]) + f(i, j));
      if (!ok) continue;
      std::vector<GlueVector> gens;
      for (std::size_t j = 0; j < anchors.size(); ++j)
        gens.push_back({cfg.left ? cfg.left_frame[j] : AmbientVector{}, table->representative(anchors[j])});
      gens.push_back({cfg.left ? cfg.left_frame[i] : AmbientVector{}, table->representative(v)});
      GlueCode code(cfg.left, cfg.right, gens);
      if (!is_integral(code)) continue;
      if (has_vector_below(overlattice(code), cfg.target_min)) continue;
      out.push_back(v);
    }
    return out;
  }

  std::vector<std::vector<DiscElement>> anchors() const {
    const std::size_t depth = std::min<std::size_t>(2, cfg.glue_rank);
    std::vector<std::vector<DiscElement>> out;
    auto apply = [&](const DiscElement& a, std::size_t g) { return act->apply(a, g); };
    const bool reduce = cfg.pin_first_anchor && cfg.symmetry == SymmetryMode::right_aut;
    std::vector<DiscElement> firsts;
    if (reduce) {
      for (const auto& o : orbit_partition(pools[0], act->generator_count(), apply)) firsts.push_back(o.front());
    } else {
      firsts = pools[0];
    }
    for (const auto& c1 : firsts) {
      std::vector<DiscElement> p1{c1};
      if (!survives(p1)) continue;
      if (depth == 1) {
        out.push_back(p1);
        continue;
      }
      std::vector<DiscElement> seconds;
      if (reduce) {
        IsometryGroup st = stabilizer(*group, c1, apply);
        DiscriminantAction sa(st, db);
        auto sapply = [&](const DiscElement& a, std::size_t g) { return sa.apply(a, g); };
        for (const auto& o : orbit_partition(pools[1], sa.generator_count(), sapply)) seconds.push_back(o.front());
      } else {
        seconds = pools[1];
      }
      for (const auto& c2 : seconds) {
        std::vector<DiscElement> p2{c1, c2};
        if (survives(p2)) out.push_back(p2);
      }
    }
    return out;
  }

  void dfs(std::vector<DiscElement>& prefix, const WorkItem& item, const SearchOptions& opts, BudgetCounter& budget,
           ItemOutcome& out, const Rational& prev_min) const {
    const std::size_t k = prefix.size();
    const auto* order = &item.order;
    if (k == cfg.glue_rank) {
      std::vector<DiscElement> sol(prefix.size());
      for (std::size_t j = 0; j < prefix.size(); ++j) sol[item.order[j]] = prefix[j];
      out.solutions.push_back(std::move(sol));
      return;
    }
    const std::size_t fk = item.order[k];
    const std::vector<DiscElement>& cands =
        item.filtered && !(*item.filtered)[fk].empty() ? (*item.filtered)[fk] : pools[fk];
    out.sizes[fk] = std::max(out.sizes[fk], cands.size());
    for (const auto& c : cands) {
      if (opts.cancel && opts.cancel->load()) throw BudgetExhausted("glue search cancelled");
      budget.tick();
      ++out.nodes;
      prefix.push_back(c);
      // Integrality first, then the minimum.
      if (congruent(prefix, k, order)) {
        Lattice lk = lattice_of(prefix, order);
        if (!has_vector_below(lk, cfg.target_min)) {
          Rational m = prev_min;
          if (opts.check_monotonicity) {
            m = minimum(lk);
            if (m > prev_min) throw VerificationFailure("glue search: minimum increased under extension");
          }
          dfs(prefix, item, opts, budget, out, m);
        }
      }
      prefix.pop_back();
    }
  }
};

GlueSearch::GlueSearch(SearchConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
GlueSearch::~GlueSearch() = default;

const SearchConfig& GlueSearch::config() const { return impl_->cfg; }
const DiscriminantGroup& GlueSearch::disc() const { return impl_->db; }
const ClassTable& GlueSearch::classes() const { return *impl_->table; }
const RatMatrix& GlueSearch::frame() const { return impl_->f; }
const IsometryGroup& GlueSearch::symmetry() const { return *impl_->group; }
const DiscriminantAction& GlueSearch::action() const { return *impl_->act; }
Rational GlueSearch::pool_norm(std::size_t i) const { return impl_->pool_norms.at(i); }
const std::vector<DiscElement>& GlueSearch::pool_classes(std::size_t i) const { return impl_->pools.at(i); }
Lattice GlueSearch::lattice_of(const std::vector<DiscElement>& prefix) const { return impl_->lattice_of(prefix); }
bool GlueSearch::admissible(const std::vector<DiscElement>& prefix) const { return impl_->survives(prefix); }
std::vector<std::vector<DiscElement>> GlueSearch::anchor_enumeration() const { return impl_->anchors(); }

std::vector<DiscElement> GlueSearch::depth_filter(std::size_t i, const std::vector<DiscElement>& anchors) const {
  if (i < anchors.size() || i >= impl_->cfg.glue_rank) throw InputError("depth_filter: depth out of range");
  return impl_->filter(i, anchors);
}

std::vector<AmbientVector> GlueSearch::candidate_pool(std::size_t i, const std::vector<DiscElement>& anchors) const {
  const Impl& m = *impl_;
  std::vector<AmbientVector> out;
  std::vector<AmbientVector> reps;
  for (const auto& a : anchors) reps.push_back(m.table->representative(a));
  for (const auto& cls : m.pools.at(i)) {
    for (auto& v : m.table->vectors_of_norm(cls, m.pool_norms[i])) {
      bool ok = true;
      for (std::size_t j = 0; j < reps.size() && ok; ++j) ok = is_integer(m.cfg.right.inner(v, reps[j]) + m.f(i, j));
      if (ok) out.push_back(std::move(v));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SearchResult GlueSearch::run(const SearchOptions& opts) const {
  const Impl& m = *impl_;
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t s = m.cfg.glue_rank;
  SearchResult res;
  res.stats.min_candidates.assign(s, 0);
  res.stats.max_candidates.assign(s, 0);
  const std::string digest = config_digest(m.cfg);
  std::optional<json> resume;
  if (opts.resume_path) {
    std::ifstream in(*opts.resume_path);
    if (!in) throw InputError("cannot read checkpoint " + *opts.resume_path);
    resume = json::parse(in, nullptr, false);
    if (resume->is_discarded() || resume->value("format", "") != "latt-checkpoint 1")
      throw InputError("not a checkpoint file");
    if (resume->at("config_digest").get<std::string>() != digest)
      throw InputError("checkpoint belongs to a different configuration");
  }
  for (const auto& pool : m.pools)
    if (pool.empty()) {
      res.infeasible = true;
      return res;
    }

  // Work items: anchor tuples, extended by the depth-3 candidate when s >= 3.
  std::vector<WorkItem> items;
  std::vector<std::vector<DiscElement>> anchor_list;
  if (!opts.prefix.empty()) {
    if (opts.prefix.size() > s) throw InputError("glue search: prefix longer than the glue rank");
    anchor_list.push_back(opts.prefix);
  } else {
    anchor_list = m.anchors();
  }
  res.stats.anchors = anchor_list.size();
  for (std::size_t a = 0; a < anchor_list.size(); ++a) {
    const auto& anc = anchor_list[a];
    if (!m.survives(anc)) continue;
    std::vector<std::size_t> order(s);
    for (std::size_t i = 0; i < s; ++i) order[i] = i;
    if (anc.size() < 2 || s < 3 || anc.size() >= s) {
      items.push_back({anc, a, nullptr, order});
      continue;
    }
    auto filtered = std::make_shared<std::vector<std::vector<DiscElement>>>(s);
    std::vector<DiscElement> two(anc.begin(), anc.begin() + 2);
    for (std::size_t i = anc.size(); i < s; ++i) (*filtered)[i] = m.filter(i, two);
    bool empty = false;
    for (std::size_t i = anc.size(); i < s; ++i) empty = empty || (*filtered)[i].empty();
    if (empty) continue;
    if (m.cfg.smallest_set_first && anc.size() == 2)
      std::stable_sort(order.begin() + 2, order.end(), [&](std::size_t x, std::size_t y) {
        return (*filtered)[x].size() < (*filtered)[y].size();
      });
    if (anc.size() == 2) {
      for (const auto& c3 : (*filtered)[order[2]]) {
        std::vector<DiscElement> pre = anc;
        pre.push_back(c3);
        items.push_back({pre, a, filtered, order});
      }
    } else {
      items.push_back({anc, a, filtered, order});
    }
  }
  res.stats.work_items = items.size();

  // Resume state.
  std::vector<ItemOutcome> outcomes(items.size());
  std::vector<char> done(items.size(), 0);
  if (resume) {
    const json& ck = *resume;
    if (ck.at("items").get<std::size_t>() != items.size()) throw InputError("checkpoint item count mismatch");
    for (const auto& e : ck.at("completed")) {
      std::size_t id = e.at("item").get<std::size_t>();
      if (id >= items.size()) throw InputError("checkpoint item out of range");
      done[id] = 1;
      outcomes[id].nodes = e.at("nodes").get<std::uint64_t>();
      outcomes[id].sizes = e.at("sizes").get<std::vector<std::size_t>>();
      for (const auto& sol : e.at("solutions")) outcomes[id].solutions.push_back(sol.get<std::vector<DiscElement>>());
    }
  }

  BudgetCounter budget(m.cfg.node_budget);
  std::mutex ck_mutex;
  std::size_t since_write = 0;
  auto write_checkpoint = [&]() {
    if (!opts.checkpoint_path) return;
    json ck;
    ck["format"] = "latt-checkpoint 1";
    ck["config_digest"] = digest;
    ck["items"] = items.size();
    json completed = json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!done[i]) continue;
      completed.push_back({{"item", i},
                           {"nodes", outcomes[i].nodes},
                           {"sizes", outcomes[i].sizes},
                           {"solutions", outcomes[i].solutions}});
    }
    ck["completed"] = completed;
    std::ofstream o(*opts.checkpoint_path + ".tmp");
    o << ck.dump(1) << '\n';
    o.close();
    std::rename((*opts.checkpoint_path + ".tmp").c_str(), opts.checkpoint_path->c_str());
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      if (done[i]) continue;
      ItemOutcome out;
      out.sizes.assign(s, 0);
      try {
        budget.tick();
        ++out.nodes;
        std::vector<DiscElement> prefix = items[i].prefix;
        Rational pm = m.base_min;
        if (opts.check_monotonicity && !prefix.empty()) {
          pm = minimum(m.lattice_of(prefix, &items[i].order));
          if (pm > m.base_min) throw VerificationFailure("glue search: minimum increased under extension");
        }
        if (m.survives(prefix, &items[i].order)) m.dfs(prefix, items[i], opts, budget, out, pm);
      } catch (const BudgetExhausted&) {
        out.exhausted = true;
      }
      std::lock_guard<std::mutex> lock(ck_mutex);
      outcomes[i] = std::move(out);
      if (!outcomes[i].exhausted) {
        done[i] = 1;
        if (++since_write >= std::max<std::size_t>(1, m.cfg.checkpoint_interval)) {
          write_checkpoint();
          since_write = 0;
        }
      }
    }
  };
  const unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  write_checkpoint();

  // Merge in item order.
  std::vector<std::vector<DiscElement>> raw;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& o = outcomes[i];
    res.stats.nodes += o.nodes;
    if (o.exhausted) {
      res.complete = false;
      res.exhausted_items.push_back(i);
    }
    for (std::size_t k = 0; k < s && k < o.sizes.size(); ++k) {
      if (o.sizes[k] == 0) continue;
      res.stats.max_candidates[k] = std::max(res.stats.max_candidates[k], o.sizes[k]);
      if (res.stats.min_candidates[k] == 0 || o.sizes[k] < res.stats.min_candidates[k])
        res.stats.min_candidates[k] = o.sizes[k];
    }
    for (const auto& sol : o.solutions) raw.push_back(sol);
  }
  res.stats.raw_solutions = raw.size();

  // Verify each raw solution and fuse symmetry orbits.
  auto apply_tuple = [&](const std::vector<DiscElement>& t, std::size_t g) {
    std::vector<DiscElement> out;
    for (const auto& a : t) out.push_back(m.act->apply(a, g));
    return out;
  };
  std::map<std::vector<DiscElement>, std::size_t> canon_index;
  std::vector<std::vector<DiscElement>> uncapped;
  for (const auto& sol : raw) {
    std::set<std::vector<DiscElement>> orbit{sol};
    std::vector<std::vector<DiscElement>> queue{sol};
    bool capped = false;
    for (std::size_t q = 0; q < queue.size() && !capped; ++q)
      for (std::size_t g = 0; g < m.act->generator_count(); ++g) {
        auto img = apply_tuple(queue[q], g);
        if (orbit.insert(img).second) {
          queue.push_back(img);
          if (orbit.size() > kOrbitCap) {
            capped = true;
            break;
          }
        }
      }
    std::vector<DiscElement> canon = *orbit.begin();
    if (capped) canon = sol;
    auto it = canon_index.find(canon);
    if (it != canon_index.end()) {
      ++res.lattices[it->second].raw_count;
      continue;
    }
    Lattice l = m.lattice_of(canon);
    if (!is_even(l) || !is_unimodular(l)) throw VerificationFailure("glue search: solution is not even unimodular");
    Rational mn = minimum(l);
    if (mn != m.cfg.target_min) throw VerificationFailure("glue search: solution minimum differs from the target");
    if (capped) {
      // Orbit too large to list: fuse by isometry instead.
      bool fused = false;
      for (auto& fl : res.lattices)
        if (is_isometric(l, fl.lattice)) {
          ++fl.raw_count;
          fused = true;
          break;
        }
      if (fused) continue;
    }
    FoundLattice fl{canon, {}, l, mn, kissing_number(l), 1, 1};
    for (const auto& a : canon) fl.glue.push_back(m.table->representative(a));
    fl.stabilizer_order = capped ? Integer(0) : m.group->order() / static_cast<unsigned long>(orbit.size());
    canon_index.emplace(canon, res.lattices.size());
    res.lattices.push_back(std::move(fl));
  }
  std::sort(res.lattices.begin(), res.lattices.end(),
            [](const FoundLattice& a, const FoundLattice& b) { return a.classes < b.classes; });
  res.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace latt
