#include "latt/isomgroup.hpp"

#include "internal/modrank.hpp"

namespace latt {

namespace {

using i128 = __int128;

std::vector<std::int64_t> times_matrix(const std::vector<std::int64_t>& x, const IntMatrix& g) {
  std::vector<std::int64_t> out(g.cols());
  for (std::size_t j = 0; j < g.cols(); ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != 0) s += Integer(static_cast<long>(x[i])) * g(i, j);
    if (!fits_int64(s)) throw InputError("vector coordinates overflow 64 bits");
    out[j] = s.get_si();
  }
  return out;
}

}  // namespace

bool preserves_gram(const IntMatrix& g, const RatMatrix& source_gram, const RatMatrix& target_gram) {
  if (g.rows() != source_gram.rows() || g.cols() != target_gram.rows()) return false;
  RatMatrix gr = to_rational(g);
  return gr * target_gram * gr.transpose() == source_gram;
}

Isometry::Isometry(const RatMatrix& gram, IntMatrix m) : Isometry(gram, gram, std::move(m)) {}

Isometry::Isometry(const RatMatrix& source_gram, const RatMatrix& target_gram, IntMatrix m) : m_(std::move(m)) {
  if (!preserves_gram(m_, source_gram, target_gram))
    throw VerificationFailure("matrix does not preserve the gram matrix");
}

// --- VectorSet -------------------------------------------------------------------

std::size_t VectorSet::Hash::operator()(const std::vector<std::int64_t>& v) const {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto x : v) {
    h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

VectorSet::VectorSet(const Lattice& l, const Rational& depth, const EnumOptions& opts)
    : lattice_(l), depth_(depth) {
  const std::size_t n = l.rank();
  den_ = common_denominator(l.gram());
  std::vector<std::int64_t> g(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Integer e = Rational(l.gram()(i, j) * den_).get_num();
      if (abs(e) > (Integer(1) << 31)) throw InputError("gram entries too large for isometry computations");
      g[i * n + j] = e.get_si();
    }
  EnumOptions o = opts;
  o.keep_vectors = true;
  ShortVectorReport rep = enumerate_short(l, depth, o);
  if (rep.count > 2000000) throw BudgetExhausted("short vector set too large for isometry computations");
  coords_.reserve(2 * rep.vectors.size());
  for (const auto& v : rep.vectors) {
    for (auto c : v.coords)
      if (c > (1 << 20) || c < -(1 << 20)) throw InputError("short vector coordinates too large");
    coords_.push_back(v.coords);
    std::vector<std::int64_t> neg(v.coords);
    for (auto& c : neg) c = -c;
    coords_.push_back(std::move(neg));
  }
  coords_gram_.resize(coords_.size());
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    auto& row = coords_gram_[k];
    row.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (coords_[k][i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) row[j] += coords_[k][i] * g[i * n + j];
    }
    index_.emplace(coords_[k], static_cast<std::uint32_t>(k));
  }
  internal::ModEchelon ech(n);
  for (const auto& c : coords_) {
    ech.add(c);
    if (ech.rank() == n) break;
  }
  spans_ = ech.rank() == n;
}

std::optional<std::uint32_t> VectorSet::find(const std::vector<std::int64_t>& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::int64_t VectorSet::inner(std::size_t i, std::size_t j) const {
  const auto& a = coords_gram_[i];
  const auto& b = coords_[j];
  std::int64_t s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::int64_t VectorSet::inner_with(std::size_t i, const std::vector<std::int64_t>& w) const {
  const auto& a = coords_gram_[i];
  std::int64_t s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * w[k];
  return s;
}

Rational spanning_depth(const Lattice& l, const EnumOptions& opts) {
  const std::size_t n = l.rank();
  ShortVectorEngine eng(l);
  Rational top = eng.reduced().gram()(0, 0);
  for (std::size_t i = 1; i < n; ++i) top = std::max(top, eng.reduced().gram()(i, i));
  EnumOptions o = opts;
  o.keep_vectors = true;
  ShortVectorReport rep = eng.enumerate(top, o);
  internal::ModEchelon ech(n);
  for (const auto& v : rep.vectors) {
    ech.add(v.coords);
    if (ech.rank() == n) return v.norm;
  }
  throw VerificationFailure("short vectors up to the reduced basis norms do not span");
}

// --- IsometryGroup ---------------------------------------------------------------

IsometryGroup::IsometryGroup(std::shared_ptr<const VectorSet> pts) : points_(std::move(pts)) {
  if (!points_->spans()) throw InputError("short vectors up to the depth norm do not span the lattice");
  const std::size_t n = points_->lattice().rank();
  internal::ModEchelon ech(n);
  for (std::size_t i = 0; i < points_->size() && base_rows_.size() < n; ++i)
    if (ech.add((*points_)[i])) base_rows_.push_back(static_cast<std::uint32_t>(i));
  RatMatrix p(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) p(r, c) = static_cast<long>((*points_)[base_rows_[r]][c]);
  base_inverse_ = std::make_shared<const RatMatrix>(inverse(p));
  chain_ = std::make_shared<PermGroup>(points_->size());
}

IsometryGroup::IsometryGroup(const Lattice& l, const std::vector<IntMatrix>& generators,
                             std::optional<Rational> depth_norm)
    : IsometryGroup(std::make_shared<const VectorSet>(l, depth_norm ? *depth_norm : spanning_depth(l))) {
  for (const auto& g : generators) {
    if (!preserves_gram(g, l.gram(), l.gram())) throw InputError("generator is not an isometry of the lattice");
    add(perm_of(g), g);
  }
}

void IsometryGroup::add(const Perm& p, IntMatrix m) {
  generators_.emplace_back(lattice().gram(), std::move(m));
  perms_.push_back(p);
  // Copy on write: subgroups may share a chain only before it is extended.
  if (chain_.use_count() > 1) chain_ = std::make_shared<PermGroup>(*chain_);
  chain_->add_generator(p);
  order_ = chain_->order();
}

Perm IsometryGroup::perm_of(const IntMatrix& g) const {
  const VectorSet& s = *points_;
  Perm p(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto j = s.find(times_matrix(s[i], g));
    if (!j) throw InputError("matrix does not permute the short vectors (not an isometry)");
    p[i] = *j;
  }
  return p;
}

IntMatrix IsometryGroup::matrix_of(const Perm& p) const {
  const std::size_t n = lattice().rank();
  RatMatrix img(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) img(r, c) = static_cast<long>((*points_)[p[base_rows_[r]]][c]);
  RatMatrix g = *base_inverse_ * img;
  if (!is_integral(g)) throw VerificationFailure("permutation does not come from a lattice isometry");
  return to_integer(g);
}

bool IsometryGroup::contains(const IntMatrix& g) const {
  if (!preserves_gram(g, lattice().gram(), lattice().gram())) return false;
  return chain_->contains(perm_of(g));
}

IsometryGroup IsometryGroup::subgroup(const std::vector<Perm>& gens) const {
  IsometryGroup h(*this);
  h.generators_.clear();
  h.perms_.clear();
  h.chain_ = std::make_shared<PermGroup>(points_->size());
  h.order_ = 1;
  for (const auto& p : gens) h.add(p, matrix_of(p));
  return h;
}

// --- Discriminant action -----------------------------------------------------------

namespace {

std::vector<std::vector<std::int64_t>> disc_matrix(const DiscriminantGroup& d, const IntMatrix& g) {
  const Lattice& l = d.parent();
  const std::size_t k = d.rank();
  std::vector<std::vector<std::int64_t>> m(k);
  RatMatrix gr = to_rational(g);
  for (std::size_t i = 0; i < k; ++i) {
    auto x = l.coordinates(d.generators()[i]);
    if (!x) throw VerificationFailure("discriminant generator outside the lattice span");
    RatVector y = (*x * gr) * l.basis();
    m[i] = d.coordinates(y);
  }
  return m;
}

}  // namespace

DiscriminantAction::DiscriminantAction(const IsometryGroup& g, const DiscriminantGroup& d) : disc_(d) {
  if (!g.lattice().shares_ambient(d.parent()) || !(g.lattice().basis() == d.parent().basis()))
    throw InputError("discriminant group belongs to a different lattice or basis");
  const std::size_t k = d.rank();
  for (const auto& iso : g.generators()) {
    auto m = disc_matrix(d, iso.matrix());
    // Well defined: order relations and the bilinear form are respected.
    for (std::size_t i = 0; i < k; ++i) {
      DiscElement scaled(m[i]);
      for (auto& x : scaled) x *= d.orders()[i];
      if (!d.is_zero(scaled)) throw VerificationFailure("induced discriminant action is not well defined");
      for (std::size_t j = 0; j < k; ++j) {
        DiscElement ei(k, 0), ej(k, 0);
        ei[i] = 1;
        ej[j] = 1;
        if (d.bilinear(m[i], m[j]) != d.bilinear(ei, ej))
          throw VerificationFailure("induced discriminant action does not preserve the bilinear form");
      }
    }
    mats_.push_back(std::move(m));
  }
}

DiscElement DiscriminantAction::apply_matrix(const std::vector<std::vector<std::int64_t>>& m,
                                             const DiscElement& a) const {
  const std::size_t k = disc_.rank();
  DiscElement out(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j) {
      i128 t = static_cast<i128>(a[i]) * m[i][j] + out[j];
      out[j] = static_cast<std::int64_t>(t % disc_.orders()[j]);
    }
  }
  return disc_.reduce(out);
}

DiscElement DiscriminantAction::apply(const DiscElement& a, std::size_t gen) const {
  return apply_matrix(mats_.at(gen), a);
}

std::vector<std::vector<std::int64_t>> DiscriminantAction::matrix_for(const IntMatrix& g) const {
  return disc_matrix(disc_, g);
}

DiscriminantAction induced_discriminant_action(const IsometryGroup& g, const DiscriminantGroup& d) {
  return DiscriminantAction(g, d);
}

// --- Difference sublattice -----------------------------------------------------------

DifferenceSublattice group_difference_sublattice(const Lattice& l, const std::vector<IntMatrix>& generators) {
  const std::size_t n = l.rank();
  RatMatrix rows(0, l.ambient_dim());
  bool nonzero = false;
  for (const auto& s : generators) {
    if (!preserves_gram(s, l.gram(), l.gram())) throw InputError("generator is not an isometry of the lattice");
    for (std::size_t i = 0; i < n; ++i) {
      IntVector x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = s(i, j) - (i == j ? 1 : 0);
      bool zero = true;
      for (const auto& c : x) zero = zero && c == 0;
      if (zero) continue;
      nonzero = true;
      rows.append_row(l.vector(x));
    }
  }
  if (!nonzero) throw InputError("difference sublattice is the zero lattice (all generators are trivial)");
  Lattice m = Lattice::generated_in(l, rows, l.label().empty() ? "" : "M(" + l.label() + ")");
  DifferenceSublattice out{m, m.rank(), m.rank() < n, std::nullopt};
  if (!out.rank_drop) out.index = sublattice_index(m, l);
  return out;
}

}  // namespace latt
