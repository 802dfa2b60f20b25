#include "latt/discriminant.hpp"

#include "latt/normal_form.hpp"

namespace latt {

DiscriminantGroup::DiscriminantGroup(const Lattice& parent) : parent_(parent) {
  const RatMatrix& g = parent_.gram();
  if (!is_integral(g)) throw InputError("discriminant_group: gram matrix is not integral");
  const std::size_t n = parent_.rank();
  SmithForm snf = smith_normal_form(to_integer(g));
  if (snf.divisors.size() != n) throw InputError("discriminant_group: singular gram matrix");
  IntMatrix v_inv = to_integer(inverse(to_rational(snf.right)));
  dual_basis_ = dual_lattice(parent_).basis();

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i)
    if (snf.divisors[i] != 1) kept.push_back(i);
  dual_to_disc_ = IntMatrix(n, kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t i = kept[k];
    orders_.push_back(to_int64(snf.divisors[i]));
    RatVector f(n);
    for (std::size_t j = 0; j < n; ++j) {
      f[j] = Rational(v_inv(i, j));
      dual_to_disc_(j, k) = snf.right(j, i);
    }
    generators_.push_back(f * dual_basis_);
  }

  const std::size_t k = orders_.size();
  bilinear_ = RatMatrix(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) bilinear_(i, j) = frac(parent_.inner(generators_[i], generators_[j]));
  if (is_even(parent_)) {
    RatVector q(k);
    for (std::size_t i = 0; i < k; ++i) q[i] = frac(parent_.norm(generators_[i]) / 2);
    quadratic_ = std::move(q);
  }
}

Integer DiscriminantGroup::order() const {
  Integer o = 1;
  for (auto d : orders_) o *= Integer(static_cast<long>(d));
  return o;
}

bool DiscriminantGroup::is_elementary(std::int64_t p) const {
  if (orders_.empty()) return false;
  for (auto d : orders_)
    if (d != p) return false;
  return true;
}

DiscElement DiscriminantGroup::from_dual_coordinates(const IntVector& c) const {
  DiscElement a(orders_.size());
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    Integer s = 0;
    for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * dual_to_disc_(j, k);
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), s.get_mpz_t(), Integer(static_cast<long>(orders_[k])).get_mpz_t());
    a[k] = r.get_si();
  }
  return a;
}

DiscElement DiscriminantGroup::coordinates(const AmbientVector& y) const {
  IntVector c(parent_.rank());
  for (std::size_t j = 0; j < parent_.rank(); ++j) {
    Rational ip = parent_.inner(y, parent_.basis().row(j));
    if (!is_integer(ip)) throw InputError("vector is not in the dual lattice");
    c[j] = ip.get_num();
  }
  return from_dual_coordinates(c);
}

AmbientVector DiscriminantGroup::element(const DiscElement& a) const {
  if (a.size() != orders_.size()) throw InputError("discriminant element has wrong length");
  AmbientVector v(parent_.ambient_dim());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    Rational c(static_cast<long>(a[i]));
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += c * generators_[i][j];
  }
  return v;
}

DiscElement DiscriminantGroup::reduce(DiscElement a) const {
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] %= orders_[i];
    if (a[i] < 0) a[i] += orders_[i];
  }
  return a;
}

bool DiscriminantGroup::is_zero(const DiscElement& a) const {
  auto r = reduce(a);
  for (auto x : r)
    if (x != 0) return false;
  return true;
}

Rational DiscriminantGroup::bilinear(const DiscElement& a, const DiscElement& b) const {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (a[i] != 0 && b[j] != 0)
        s += Rational(static_cast<long>(a[i])) * Rational(static_cast<long>(b[j])) * bilinear_(i, j);
  return frac(s);
}

Rational DiscriminantGroup::quadratic(const DiscElement& a) const {
  if (!quadratic_) throw InputError("quadratic form is only defined for even lattices");
  // Q(sum a_i g_i) = sum a_i^2 Q(g_i) + sum_{i<j} a_i a_j (g_i, g_j).
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    Rational ai(static_cast<long>(a[i]));
    s += ai * ai * (*quadratic_)[i];
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[j] != 0) s += ai * Rational(static_cast<long>(a[j])) * bilinear_(i, j);
  }
  return frac(s);
}

std::vector<DiscElement> DiscriminantGroup::elements() const {
  std::vector<DiscElement> out;
  DiscElement a(orders_.size(), 0);
  while (true) {
    out.push_back(a);
    std::size_t i = a.size();
    while (i > 0) {
      --i;
      if (++a[i] < orders_[i]) break;
      a[i] = 0;
      if (i == 0) return out;
    }
    if (a.empty()) return out;
  }
}

DiscriminantGroup discriminant_group(const Lattice& l) { return DiscriminantGroup(l); }

}  // namespace latt
