#include "latt/permgroup.hpp"

#include <deque>

namespace latt {

Perm identity_perm(std::size_t n) {
  Perm p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
  return c;
}

Perm inverse(const Perm& p) {
  Perm q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<std::uint32_t>(i);
  return q;
}

bool is_identity(const Perm& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

PermGroup::PermGroup(std::size_t degree) : degree_(degree) {}

void PermGroup::rebuild_orbit(Level& lv) const {
  lv.slot.assign(degree_, -1);
  lv.orbit.assign(1, lv.point);
  lv.transversal.assign(1, identity_perm(degree_));
  lv.slot[lv.point] = 0;
  for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
    for (const auto& g : lv.gens) {
      std::uint32_t q = g[lv.orbit[k]];
      if (lv.slot[q] >= 0) continue;
      lv.slot[q] = static_cast<std::int32_t>(lv.orbit.size());
      lv.orbit.push_back(q);
      lv.transversal.push_back(compose(lv.transversal[k], g));
    }
  }
}

std::pair<Perm, std::size_t> PermGroup::sift(Perm g, std::size_t level) const {
  for (std::size_t i = level; i < levels_.size(); ++i) {
    const Level& lv = levels_[i];
    std::int32_t s = lv.slot[g[lv.point]];
    if (s < 0) return {std::move(g), i};
    g = compose(g, inverse(lv.transversal[s]));
  }
  return {std::move(g), levels_.size()};
}

void PermGroup::extend(const Perm& residue, std::size_t from) {
  // residue fixes the base points before `from`; add it to those levels and below.
  if (from == levels_.size()) {
    std::uint32_t moved = 0;
    while (residue[moved] == moved) ++moved;
    Level lv;
    lv.point = moved;
    levels_.push_back(std::move(lv));
  }
  for (std::size_t i = 0; i <= from && i < levels_.size(); ++i) {
    // A strong generator belongs to level i when it fixes base points 0..i-1.
    bool fixes = true;
    for (std::size_t j = 0; j < i && fixes; ++j) fixes = residue[levels_[j].point] == levels_[j].point;
    if (fixes) levels_[i].gens.push_back(residue);
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) rebuild_orbit(levels_[i]);
}

void PermGroup::close() {
  // Repeat until every Schreier generator sifts to the identity.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = levels_.size(); i-- > 0 && !changed;) {
      const Level& lv = levels_[i];
      for (std::size_t k = 0; k < lv.orbit.size() && !changed; ++k) {
        for (std::size_t gi = 0; gi < lv.gens.size() && !changed; ++gi) {
          const Perm& g = lv.gens[gi];
          Perm ug = compose(lv.transversal[k], g);
          std::int32_t s = lv.slot[ug[lv.point]];
          Perm schreier = compose(ug, inverse(lv.transversal[s]));
          if (is_identity(schreier)) continue;
          auto [res, stop] = sift(std::move(schreier), i + 1);
          if (stop < levels_.size() || !is_identity(res)) {
            extend(res, stop);
            changed = true;
          }
        }
      }
    }
  }
}

bool PermGroup::add_generator(const Perm& g) {
  if (g.size() != degree_) throw InputError("permutation degree mismatch");
  if (contains(g)) return false;
  generators_.push_back(g);
  auto [res, stop] = sift(g, 0);
  extend(res, stop);
  close();
  return true;
}

bool PermGroup::contains(const Perm& g) const {
  auto [res, stop] = sift(g, 0);
  return stop == levels_.size() && is_identity(res);
}

Integer PermGroup::order() const {
  Integer o = 1;
  for (const auto& lv : levels_) o *= static_cast<unsigned long>(lv.orbit.size());
  return o;
}

std::vector<std::uint32_t> PermGroup::base() const {
  std::vector<std::uint32_t> b;
  for (const auto& lv : levels_) b.push_back(lv.point);
  return b;
}

}  // namespace latt
