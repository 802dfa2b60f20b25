#include "latt/discglue.hpp"

#include <algorithm>

namespace latt {

namespace {

bool in_dual(const Lattice& l, const AmbientVector& v) {
  if (v.size() != l.ambient_dim() || !l.coordinates(v)) return false;
  for (std::size_t j = 0; j < l.rank(); ++j)
    if (!is_integer(l.inner(v, l.basis().row(j)))) return false;
  return true;
}

}  // namespace

GlueCode::GlueCode(std::optional<Lattice> left, std::optional<Lattice> right, std::vector<GlueVector> generators)
    : left_(std::move(left)), right_(std::move(right)), generators_(std::move(generators)) {
  if (!left_ && !right_) throw InputError("glue code needs at least one factor");
  if (left_ && right_)
    base_ = orthogonal_sum(*left_, *right_);
  else
    base_ = left_ ? *left_ : *right_;
  for (const auto& g : generators_) {
    if (left_ ? !in_dual(*left_, g.left) : !g.left.empty())
      throw InputError("glue vector: left part is not in the dual of the left factor");
    if (right_ ? !in_dual(*right_, g.right) : !g.right.empty())
      throw InputError("glue vector: right part is not in the dual of the right factor");
  }
}

AmbientVector GlueCode::joined(const GlueVector& g) const {
  if (left_ && right_) return join_vectors(g.left, g.right);
  return left_ ? g.left : g.right;
}

Integer GlueCode::glue_order() const { return sublattice_index(*base_, overlattice(*this)); }

std::size_t GlueCode::rank(std::int64_t p) const {
  Integer o = glue_order();
  std::size_t s = 0;
  while (o % p == 0) {
    o /= p;
    ++s;
  }
  if (o != 1) throw InputError("glue group order is not a power of p");
  return s;
}

Lattice overlattice(const GlueCode& code) {
  std::vector<AmbientVector> vs;
  for (const auto& g : code.generators()) vs.push_back(code.joined(g));
  if (vs.empty()) return code.base();
  return lattice_sum(code.base(), vs);
}

bool is_integral(const GlueCode& code) {
  const Lattice& m = code.base();
  std::vector<AmbientVector> vs;
  for (const auto& g : code.generators()) vs.push_back(code.joined(g));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i; j < vs.size(); ++j)
      if (!is_integer(m.inner(vs[i], vs[j]))) return false;
  return is_integral(m);
}

bool is_even_glue(const GlueCode& code) {
  if (!is_integral(code) || !is_even(code.base())) return false;
  for (const auto& g : code.generators()) {
    Rational nn = code.base().norm(code.joined(g));
    if (!is_integer(nn) || nn.get_num() % 2 != 0) return false;
  }
  return true;
}

GlueFormCheck discriminant_form_check(const GlueCode& code) {
  const auto& gens = code.generators();
  std::optional<DiscriminantGroup> da, db;
  if (code.left()) da.emplace(*code.left());
  if (code.right()) db.emplace(*code.right());
  std::vector<DiscElement> ca, cb;
  for (const auto& g : gens) {
    if (da) ca.push_back(da->coordinates(g.left));
    if (db) cb.push_back(db->coordinates(g.right));
  }
  auto bil = [&](std::size_t i, std::size_t j) {
    Rational t = 0;
    if (da) t += da->bilinear(ca[i], ca[j]);
    if (db) t += db->bilinear(cb[i], cb[j]);
    return t;
  };
  GlueFormCheck r;
  r.integral = true;
  for (std::size_t i = 0; i < gens.size() && r.integral; ++i)
    for (std::size_t j = i; j < gens.size() && r.integral; ++j) r.integral = is_integer(bil(i, j));
  bool even_factors = (!da || da->quadratic_table()) && (!db || db->quadratic_table());
  r.even = r.integral && even_factors;
  for (std::size_t i = 0; i < gens.size() && r.even; ++i) {
    Rational q = 0;
    if (da) q += da->quadratic(ca[i]);
    if (db) q += db->quadratic(cb[i]);
    r.even = is_integer(q);
  }
  return r;
}

RatMatrix class_gram(const Lattice& l, std::span<const AmbientVector> classes) {
  RatMatrix g(classes.size(), classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = 0; j < classes.size(); ++j) g(i, j) = l.inner(classes[i], classes[j]);
  return g;
}

bool gram_congruence_check(const RatMatrix& left_gram, const RatMatrix& right_gram) {
  if (left_gram.rows() != right_gram.rows() || left_gram.cols() != right_gram.cols())
    throw InputError("gram congruence: size mismatch");
  for (std::size_t i = 0; i < left_gram.rows(); ++i)
    for (std::size_t j = 0; j < left_gram.cols(); ++j)
      if (!is_integer(left_gram(i, j) + right_gram(i, j))) return false;
  return true;
}

bool gram_congruence_check(const Lattice& a, std::span<const AmbientVector> classes_left, const Lattice& b,
                           std::span<const AmbientVector> classes_right) {
  if (classes_left.size() != classes_right.size()) throw InputError("gram congruence: length mismatch");
  return gram_congruence_check(class_gram(a, classes_left), class_gram(b, classes_right));
}

// --- Subspaces -------------------------------------------------------------------

Integer gaussian_binomial(std::int64_t p, std::size_t n, std::size_t k) {
  if (k > n) return 0;
  Integer num = 1, den = 1, q = p;
  for (std::size_t i = 0; i < k; ++i) {
    Integer a, b;
    mpz_pow_ui(a.get_mpz_t(), q.get_mpz_t(), n - i);
    mpz_pow_ui(b.get_mpz_t(), q.get_mpz_t(), i + 1);
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

SubspaceEnumerator::SubspaceEnumerator(std::int64_t p, std::size_t n, std::size_t k) : p_(p), n_(n), k_(k) {
  if (k > n) throw InputError("subspace dimension exceeds the ambient dimension");
  pivots_.resize(k);
  for (std::size_t i = 0; i < k; ++i) pivots_[i] = i;
  reset_free();
}

void SubspaceEnumerator::reset_free() {
  free_.clear();
  for (std::size_t r = 0; r < k_; ++r)
    for (std::size_t c = pivots_[r] + 1; c < n_; ++c)
      if (std::find(pivots_.begin(), pivots_.end(), c) == pivots_.end()) free_.emplace_back(r, c);
  values_.assign(free_.size(), 0);
}

bool SubspaceEnumerator::next_pivots() {
  // Next k-combination of {0..n-1} in lexicographic order.
  std::size_t i = k_;
  while (i > 0 && pivots_[i - 1] == n_ - k_ + i - 1) --i;
  if (i == 0) return false;
  ++pivots_[i - 1];
  for (std::size_t j = i; j < k_; ++j) pivots_[j] = pivots_[j - 1] + 1;
  reset_free();
  return true;
}

bool SubspaceEnumerator::next(std::vector<DiscElement>& basis) {
  if (done_) return false;
  if (started_) {
    std::size_t i = values_.size();
    while (i > 0 && values_[i - 1] == p_ - 1) values_[--i] = 0;
    if (i > 0) {
      ++values_[i - 1];
    } else if (!next_pivots()) {
      done_ = true;
      return false;
    }
  }
  started_ = true;
  basis.assign(k_, DiscElement(n_, 0));
  for (std::size_t r = 0; r < k_; ++r) basis[r][pivots_[r]] = 1;
  for (std::size_t f = 0; f < free_.size(); ++f) basis[free_[f].first][free_[f].second] = values_[f];
  return true;
}

std::int64_t elementary_prime(const DiscriminantGroup& d) {
  if (d.is_trivial()) return 0;
  std::int64_t p = d.orders()[0];
  return is_prime(p) && d.is_elementary(p) ? p : 0;
}

std::vector<std::vector<DiscElement>> subspaces(const DiscriminantGroup& d, std::size_t k) {
  std::vector<std::vector<DiscElement>> out;
  if (k == 0) {
    out.emplace_back();
    return out;
  }
  std::int64_t p = elementary_prime(d);
  if (p == 0) throw InputError("subspaces: discriminant group is not elementary");
  SubspaceEnumerator it(p, d.rank(), k);
  std::vector<DiscElement> b;
  while (it.next(b)) out.push_back(b);
  return out;
}

std::vector<DiscElement> span_elements(const DiscriminantGroup& d, const std::vector<DiscElement>& basis) {
  std::vector<DiscElement> out{DiscElement(d.rank(), 0)};
  for (const auto& b : basis) {
    std::vector<DiscElement> next;
    for (const auto& x : out) {
      DiscElement y = x;
      // Multiples of b until they return to x.
      do {
        next.push_back(y);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i];
        y = d.reduce(y);
      } while (y != x);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    out = std::move(next);
  }
  return out;
}

// --- Class table -----------------------------------------------------------------

ClassTable::ClassTable(const DiscriminantGroup& d, EnumOptions opts)
    : disc_(d), opts_(opts), engine_(std::make_shared<ShortVectorEngine>(d.parent())) {
  opts_.keep_vectors = true;
}

const ClassTable::Entry& ClassTable::entry(const DiscElement& a0) const {
  DiscElement a = disc_.reduce(a0);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
  }
  Entry e;
  const Lattice& l = disc_.parent();
  if (disc_.is_zero(a)) {
    e.minimum = 0;
    e.representative = AmbientVector(l.ambient_dim(), 0);
  } else {
    AmbientVector shift = disc_.element(a);
    e.minimum = engine_->coset_minimum(shift, opts_);
    ShortVectorReport r = engine_->coset(shift, e.minimum, opts_);
    std::optional<AmbientVector> best;
    for (const auto& v : r.vectors) {
      AmbientVector x = shift;
      AmbientVector y = l.vector(std::span<const std::int64_t>(v.coords));
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
      if (!best || x < *best) best = x;
    }
    if (!best) throw VerificationFailure("class table: no vector attains the coset minimum");
    e.representative = *best;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(a, std::move(e)).first->second;
}

Rational ClassTable::minimum(const DiscElement& a) const { return entry(a).minimum; }
AmbientVector ClassTable::representative(const DiscElement& a) const { return entry(a).representative; }

std::vector<AmbientVector> ClassTable::vectors_of_norm(const DiscElement& a0, const Rational& norm) const {
  DiscElement a = disc_.reduce(a0);
  const Lattice& l = disc_.parent();
  std::vector<AmbientVector> out;
  AmbientVector shift = disc_.element(a);
  if (disc_.is_zero(a)) {
    ShortVectorReport r = engine_->enumerate(norm, opts_);
    for (const auto& v : r.vectors) {
      if (v.norm != norm) continue;
      AmbientVector x = l.vector(std::span<const std::int64_t>(v.coords));
      out.push_back(x);
      for (auto& t : x) t = -t;
      out.push_back(x);
    }
  } else {
    ShortVectorReport r = engine_->coset(shift, norm, opts_);
    for (const auto& v : r.vectors) {
      if (v.norm != norm) continue;
      AmbientVector x = shift;
      AmbientVector y = l.vector(std::span<const std::int64_t>(v.coords));
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
      out.push_back(std::move(x));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t class_minimum_census(const ClassTable& table, const std::vector<DiscElement>& subspace,
                                 const Rational& norm_target) {
  std::size_t count = 0;
  for (const auto& a : span_elements(table.disc(), subspace))
    if (!table.disc().is_zero(a) && table.minimum(a) == norm_target) ++count;
  return count;
}

}  // namespace latt
