#include "latt/neighbor.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <thread>

namespace latt {

namespace {

Integer pow_int(std::int64_t p, unsigned e) {
  Integer r = 1;
  for (unsigned i = 0; i < e; ++i) r *= p;
  return r;
}

Integer witness_modulus(const Lattice& l, std::int64_t p) {
  Integer m = Integer(p) * p;
  return is_even(l) ? Integer(2 * m) : m;
}

bool norm_divisible(const Lattice& l, const AmbientVector& v, const Integer& m) {
  Rational nn = l.norm(v);
  return is_integer(nn) && nn.get_num() % m == 0;
}

void check_prime(std::int64_t p) {
  if (!is_prime(p)) throw InputError("neighbor: p is not prime");
}

// Gram matrix of an integral lattice as machine integers.
std::vector<std::vector<std::int64_t>> int_gram(const Lattice& l) {
  std::vector<std::vector<std::int64_t>> g(l.rank(), std::vector<std::int64_t>(l.rank()));
  for (std::size_t i = 0; i < l.rank(); ++i)
    for (std::size_t j = 0; j < l.rank(); ++j) g[i][j] = to_int64(l.gram()(i, j).get_num());
  return g;
}

std::int64_t mod_p(std::int64_t x, std::int64_t p) { return ((x % p) + p) % p; }

// Scales a nonzero vector mod p so its first nonzero entry is 1.
void normalize_line(std::vector<std::int64_t>& v, std::int64_t p) {
  std::size_t k = 0;
  while (k < v.size() && v[k] == 0) ++k;
  if (k == v.size()) return;
  std::int64_t inv = 1;
  while ((v[k] * inv) % p != 1) ++inv;
  for (auto& x : v) x = (x * inv) % p;
}

AmbientVector lift(const Lattice& l, const std::vector<std::int64_t>& line, std::int64_t p) {
  // Centered lift keeps witnesses short.
  IntVector c(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) c[i] = line[i] > p / 2 ? line[i] - p : line[i];
  return l.vector(c);
}

// Admissible lines of L/pL (as normalized coordinate vectors) up to Aut(L).
std::vector<std::vector<std::int64_t>> witness_lines(const Lattice& l, const IsometryGroup& g, std::int64_t p,
                                                     const WalkLimits& limits, bool& complete, std::string& note) {
  const std::size_t n = l.rank();
  auto gram = int_gram(l);
  const bool even = is_even(l);
  Integer space = pow_int(p, static_cast<unsigned>(n));
  std::vector<std::vector<std::int64_t>> lines;
  auto admissible = [&](const std::vector<std::int64_t>& v) {
    // (v, v) must vanish mod p (mod 4 for p = 2), and v must pair nontrivially with L mod p.
    std::int64_t nn = 0;
    bool pairs = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t row = 0;
      for (std::size_t j = 0; j < n; ++j) row += gram[i][j] * v[j];
      if (mod_p(row, p) != 0) pairs = true;
      nn += v[i] * row;
    }
    std::int64_t q = p == 2 ? 4 : p;
    (void)even;
    return pairs && mod_p(nn, q) == 0;
  };
  if (space <= limits.max_line_space) {
    std::vector<std::int64_t> v(n, 0);
    for (;;) {
      std::size_t i = 0;
      while (i < n && ++v[i] == p) v[i++] = 0;
      if (i == n) break;
      std::vector<std::int64_t> w = v;
      normalize_line(w, p);
      if (w != v) continue;
      if (admissible(w)) lines.push_back(w);
    }
  } else {
    complete = false;
    note = "line space too large; witnesses taken from short vectors";
    std::set<std::vector<std::int64_t>> seen;
    Rational bound = minimum(l);
    for (int round = 0; round < 6 && seen.size() < limits.max_witnesses; ++round, bound += bound) {
      ShortVectorReport r = enumerate_short(l, bound);
      for (const auto& sv : r.vectors) {
        std::vector<std::int64_t> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = mod_p(sv.coords[i], p);
        if (std::all_of(w.begin(), w.end(), [](std::int64_t x) { return x == 0; })) continue;
        normalize_line(w, p);
        if (admissible(w)) seen.insert(w);
        if (seen.size() >= limits.max_witnesses) break;
      }
    }
    return {seen.begin(), seen.end()};
  }
  // Orbits under Aut(L) acting on coordinates mod p.
  std::vector<std::vector<std::vector<std::int64_t>>> gens;
  for (const auto& iso : g.generators()) {
    std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Integer r = iso.matrix()(i, j) % p;
        m[i][j] = mod_p(r.get_si(), p);
      }
    gens.push_back(std::move(m));
  }
  auto apply = [&](const std::vector<std::int64_t>& v, std::size_t k) {
    std::vector<std::int64_t> w(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) w[j] += v[i] * gens[k][i][j];
    }
    for (auto& x : w) x %= p;
    normalize_line(w, p);
    return w;
  };
  auto orbits = orbit_partition(lines, gens.size(), apply);
  std::vector<std::vector<std::int64_t>> reps;
  for (const auto& o : orbits) reps.push_back(o.front());
  if (reps.size() > limits.max_witnesses) {
    reps.resize(limits.max_witnesses);
    complete = false;
    note = "witness orbit count exceeds the limit";
  }
  return reps;
}

}  // namespace

std::optional<AmbientVector> admissible_witness(const Lattice& l, const AmbientVector& v, std::int64_t p) {
  check_prime(p);
  const Integer m = witness_modulus(l, p);
  const std::size_t n = l.rank();
  auto try_shift = [&](const IntVector& w) -> std::optional<AmbientVector> {
    AmbientVector x = v;
    AmbientVector pw = l.vector(w);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += Rational(p) * pw[i];
    if (norm_divisible(l, x, m)) return x;
    return std::nullopt;
  };
  IntVector w(n, 0);
  if (auto x = try_shift(w)) return x;
  for (std::size_t j = 0; j < n; ++j)
    for (std::int64_t t = 1; t < p; ++t) {
      IntVector u(n, 0);
      u[j] = t;
      if (auto x = try_shift(u)) return x;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::int64_t t = 1; t < p; ++t)
        for (std::int64_t s = 1; s < p; ++s) {
          IntVector u(n, 0);
          u[i] = t;
          u[j] = s;
          if (auto x = try_shift(u)) return x;
        }
  return std::nullopt;
}

NeighborStep p_neighbor(const Lattice& l, const AmbientVector& v0, std::int64_t p) {
  check_prime(p);
  if (!is_integral(l)) throw InputError("neighbor: lattice is not integral");
  auto coords = l.coordinates(v0);
  if (!coords || !is_integral(*coords)) throw InputError("neighbor: witness is not in the lattice");
  const std::size_t n = l.rank();
  std::vector<std::int64_t> c(n);
  std::size_t k = n;
  for (std::size_t j = 0; j < n; ++j) {
    Rational ip = l.inner(l.basis().row(j), v0);
    c[j] = mod_p(to_int64(Integer(ip.get_num() % p)), p);
    if (c[j] != 0 && k == n) k = j;
  }
  if (k == n) throw InputError("neighbor: witness lies in pL#");
  auto v = admissible_witness(l, v0, p);
  if (!v) throw InputError("neighbor: no admissible adjustment of the witness exists");

  std::int64_t inv = 1;
  while ((c[k] * inv) % p != 1) ++inv;
  RatMatrix gens(0, l.ambient_dim());
  for (std::size_t j = 0; j < n; ++j) {
    RatVector row = l.basis().row(j);
    for (auto& x : row) x *= p;
    gens.append_row(row);
    if (j == k || c[j] == 0) {
      if (c[j] == 0) gens.append_row(l.basis().row(j));
      continue;
    }
    // b_j - (c_j / c_k) b_k pairs with v to 0 mod p.
    std::int64_t f = (c[j] * inv) % p;
    RatVector r = l.basis().row(j);
    RatVector bk = l.basis().row(k);
    for (std::size_t t = 0; t < r.size(); ++t) r[t] -= Rational(f) * bk[t];
    gens.append_row(r);
  }
  RatVector vp = *v;
  for (auto& x : vp) x /= p;
  gens.append_row(vp);
  Lattice result = Lattice::generated_in(l, gens);

  if (!is_integral(result)) throw VerificationFailure("neighbor: result is not integral");
  if (determinant(result) != determinant(l)) throw VerificationFailure("neighbor: determinant changed");
  Lattice inter = lattice_intersection(l, result);
  if (sublattice_index(inter, l) != p || sublattice_index(inter, result) != p)
    throw VerificationFailure("neighbor: intersection index is not p");
  if (is_even(l) && !is_even(result)) throw VerificationFailure("neighbor: evenness lost");
  return NeighborStep{l, *v, p, result};
}

bool ClassKey::operator<(const ClassKey& o) const {
  if (det != o.det) return det < o.det;
  if (minimum != o.minimum) return minimum < o.minimum;
  if (kissing != o.kissing) return kissing < o.kissing;
  if (components != o.components) return components < o.components;
  return std::lexicographical_compare(theta.begin(), theta.end(), o.theta.begin(), o.theta.end(),
                                      [](const auto& a, const auto& b) {
                                        if (a.first != b.first) return a.first < b.first;
                                        return a.second < b.second;
                                      });
}

ClassKey class_key(const Lattice& l, const EnumOptions& opts) {
  ClassKey k;
  k.det = determinant(l);
  ShortVectorEngine eng(l);
  k.minimum = eng.minimum(opts);
  ShortVectorReport r = eng.enumerate(k.minimum + 2, opts);
  std::map<Rational, std::uint64_t> theta;
  std::vector<std::vector<std::int64_t>> mins;
  for (const auto& sv : r.vectors) {
    theta[sv.norm] += 2;
    if (sv.norm == k.minimum) {
      mins.push_back(sv.coords);
      std::vector<std::int64_t> neg = sv.coords;
      for (auto& x : neg) x = -x;
      mins.push_back(std::move(neg));
    }
  }
  k.theta.assign(theta.begin(), theta.end());
  k.kissing = mins.size();
  if (mins.size() <= 20000) {
    // Components of the graph joining minimal vectors with nonzero inner product.
    const Integer den = common_denominator(l.gram());
    const std::size_t n = l.rank();
    std::vector<std::vector<std::int64_t>> gram(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gram[i][j] = to_int64(Rational(l.gram()(i, j) * den).get_num());
    std::vector<std::vector<std::int64_t>> mg(mins.size(), std::vector<std::int64_t>(n, 0));
    for (std::size_t a = 0; a < mins.size(); ++a)
      for (std::size_t i = 0; i < n; ++i)
        if (mins[a][i] != 0)
          for (std::size_t j = 0; j < n; ++j) mg[a][j] += mins[a][i] * gram[i][j];
    std::vector<std::size_t> comp(mins.size(), SIZE_MAX);
    for (std::size_t s = 0; s < mins.size(); ++s) {
      if (comp[s] != SIZE_MAX) continue;
      std::size_t size = 0;
      std::vector<std::size_t> stack{s};
      comp[s] = s;
      while (!stack.empty()) {
        std::size_t a = stack.back();
        stack.pop_back();
        ++size;
        for (std::size_t b = 0; b < mins.size(); ++b) {
          if (comp[b] != SIZE_MAX) continue;
          std::int64_t ip = 0;
          for (std::size_t j = 0; j < n; ++j) ip += mg[a][j] * mins[b][j];
          if (ip != 0) {
            comp[b] = s;
            stack.push_back(b);
          }
        }
      }
      k.components.push_back(size);
    }
    std::sort(k.components.begin(), k.components.end());
  }
  return k;
}

GenusWalk genus_walk(const Lattice& seed, std::int64_t p, const WalkLimits& limits) {
  check_prime(p);
  if (!is_integral(seed)) throw InputError("genus walk: seed is not integral");
  GenusWalk walk;
  if (determinant(seed).get_num() % p == 0)
    walk.note = "p divides det(seed); the walk may not reach the whole genus";

  struct Entry {
    Lattice lattice;
    ClassKey key;
    std::unique_ptr<IsometryGroup> aut;
    std::size_t from;
  };
  std::vector<Entry> reg;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  auto add_class = [&](const Lattice& l, ClassKey key, std::size_t from) {
    Lattice c = l.canonical();
    reg.push_back({c, std::move(key), std::make_unique<IsometryGroup>(automorphism_group(c)), from});
    return reg.size() - 1;
  };
  add_class(seed, class_key(seed), 0);
  std::deque<std::size_t> frontier{0};

  try {
    while (!frontier.empty()) {
      std::size_t i = frontier.front();
      frontier.pop_front();
      bool complete = true;
      std::string note;
      auto reps = witness_lines(reg[i].lattice, *reg[i].aut, p, limits, complete, note);
      if (!complete) {
        walk.complete = false;
        walk.note = note;
      }
      // Neighbors and their keys may be computed in parallel; registration is sequential.
      std::vector<std::optional<Lattice>> nbrs(reps.size());
      std::vector<std::optional<ClassKey>> keys(reps.size());
      std::atomic<std::size_t> next{0};
      auto work = [&]() {
        for (;;) {
          std::size_t t = next.fetch_add(1);
          if (t >= reps.size()) return;
          AmbientVector v = lift(reg[i].lattice, reps[t], p);
          if (!admissible_witness(reg[i].lattice, v, p)) continue;
          Lattice nb = p_neighbor(reg[i].lattice, v, p).result;
          keys[t] = class_key(nb);
          nbrs[t] = std::move(nb);
        }
      };
      const unsigned jobs = std::max(1u, limits.jobs);
      if (jobs == 1) {
        work();
      } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
        for (auto& t : pool) t.join();
      }
      for (std::size_t t = 0; t < reps.size(); ++t) {
        if (!nbrs[t]) continue;
        const Lattice& nb = *nbrs[t];
        std::optional<std::size_t> hit;
        for (std::size_t j = 0; j < reg.size() && !hit; ++j) {
          if (!(reg[j].key == *keys[t])) continue;
          if (same_lattice(reg[j].lattice, nb) || is_isometric(nb, reg[j].lattice, reg[j].aut.get())) hit = j;
        }
        if (!hit) {
          if (reg.size() >= limits.max_classes) {
            walk.complete = false;
            walk.note = "class limit reached";
            frontier.clear();
            break;
          }
          hit = add_class(nb, *keys[t], i);
          frontier.push_back(*hit);
        }
        edges.emplace(i, *hit);
      }
    }
  } catch (const BudgetExhausted& e) {
    walk.complete = false;
    walk.note = e.what();
  }

  // Canonical order by key, ties by discovery.
  std::vector<std::size_t> order(reg.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return reg[a].key < reg[b].key; });
  std::vector<std::size_t> pos(reg.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (std::size_t i : order) {
    walk.classes.push_back({reg[i].lattice, reg[i].key, reg[i].aut->order(), pos[reg[i].from]});
    walk.mass += Rational(1) / Rational(reg[i].aut->order());
  }
  for (const auto& [a, b] : edges) walk.edges.emplace_back(pos[a], pos[b]);
  std::sort(walk.edges.begin(), walk.edges.end());
  return walk;
}

}  // namespace latt
