#include "latt/lattice.hpp"

#include "latt/normal_form.hpp"

namespace latt {

namespace {

RatMatrix compute_gram(const RatMatrix& basis, const RatMatrix& form) {
  return basis * form * basis.transpose();
}

// Hermite basis of the lattice generated by the rows of `gens` (zero rows dropped).
RatMatrix canonical_rows(const RatMatrix& gens) {
  Integer d = common_denominator(gens);
  IntMatrix scaled_gens(gens.rows(), gens.cols());
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < gens.cols(); ++j) {
      Rational t = gens(i, j) * d;
      scaled_gens(i, j) = t.get_num();
    }
  IntMatrix h = hermite_normal_form(scaled_gens).h;
  RatMatrix out(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = make_rational(h(i, j), d);
  return out;
}

}  // namespace

Lattice::Lattice(RatMatrix basis, RatMatrix ambient_form, std::string label)
    : Lattice(std::move(basis), std::make_shared<const RatMatrix>(std::move(ambient_form)), std::move(label),
              true) {}

Lattice::Lattice(RatMatrix basis, std::shared_ptr<const RatMatrix> form, std::string label, bool validate)
    : basis_(std::move(basis)), form_(std::move(form)), label_(std::move(label)),
      gram_inverse_(std::make_shared<LazyInverse>()) {
  if (validate) {
    if (form_->rows() == 0 || form_->rows() != form_->cols())
      throw InputError("ambient form must be a non-empty square matrix");
    if (!form_->is_symmetric()) throw InputError("ambient form is not symmetric");
    if (!is_positive_definite(*form_)) throw InputError("ambient form is not positive definite");
  }
  if (basis_.rows() == 0) throw InputError("lattice basis is empty (rank 0)");
  if (basis_.cols() != form_->rows()) throw InputError("basis width does not match ambient dimension");
  if (basis_.rows() > basis_.cols()) throw InputError("basis has more rows than the ambient dimension");
  gram_ = compute_gram(basis_, *form_);
  if (validate && latt::rank(basis_) != basis_.rows()) throw InputError("lattice basis is rank deficient");
}

Lattice Lattice::from_gram(const RatMatrix& gram, std::string label) {
  return Lattice(RatMatrix::identity(gram.rows()), gram, std::move(label));
}

Lattice Lattice::generated_by(const RatMatrix& generators, const RatMatrix& ambient_form, std::string label) {
  if (generators.cols() != ambient_form.rows()) throw InputError("generator width does not match ambient form");
  return Lattice(canonical_rows(generators), ambient_form, std::move(label));
}

Lattice Lattice::generated_in(const Lattice& space, const RatMatrix& generators, std::string label) {
  if (generators.cols() != space.ambient_dim()) throw InputError("generator width does not match ambient space");
  // Hermite rows are independent by construction.
  return Lattice(canonical_rows(generators), space.form_, std::move(label), false);
}

Lattice Lattice::with_label(std::string label) const {
  Lattice l = *this;
  l.label_ = std::move(label);
  return l;
}

Lattice Lattice::with_basis(RatMatrix basis) const {
  if (basis.rows() != rank() || basis.cols() != ambient_dim()) throw InputError("replacement basis has wrong shape");
  Lattice l(std::move(basis), form_, label_, false);
  if (latt::rank(l.basis_) != l.basis_.rows()) throw InputError("lattice basis is rank deficient");
  return l;
}

Lattice Lattice::canonical() const { return Lattice(canonical_rows(basis_), form_, label_, false); }

AmbientVector Lattice::vector(const IntVector& coords) const { return to_rational(coords) * basis_; }

AmbientVector Lattice::vector(std::span<const std::int64_t> coords) const {
  if (coords.size() != rank()) throw InputError("coordinate length mismatch");
  AmbientVector v(ambient_dim());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    Rational c(static_cast<long>(coords[i]));
    for (std::size_t j = 0; j < ambient_dim(); ++j) v[j] += c * basis_(i, j);
  }
  return v;
}

const RatMatrix& Lattice::gram_inverse() const {
  std::call_once(gram_inverse_->once, [this] { gram_inverse_->value = inverse(gram_); });
  return gram_inverse_->value;
}

std::optional<RatVector> Lattice::coordinates(const AmbientVector& v) const {
  if (v.size() != ambient_dim()) throw InputError("ambient vector length mismatch");
  // v = x B  =>  v A B^T = x G.
  RatVector rhs = (v * *form_) * basis_.transpose();
  RatVector x = rhs * gram_inverse();
  if (x * basis_ != v) return std::nullopt;
  return x;
}

bool Lattice::contains(const AmbientVector& v) const {
  auto x = coordinates(v);
  return x && is_integral(*x);
}

Rational Lattice::inner(const AmbientVector& a, const AmbientVector& b) const {
  return bilinear(a, *form_, b);
}

bool Lattice::shares_ambient(const Lattice& other) const {
  return form_ == other.form_ || *form_ == *other.form_;
}

RatMatrix gram(const Lattice& l) { return l.gram(); }

Lattice dual_lattice(const Lattice& l) {
  return Lattice(l.gram_inverse() * l.basis(), l.form_, l.label().empty() ? "" : l.label() + "#", false);
}

Rational determinant(const Lattice& l) { return determinant(l.gram()); }

bool is_integral(const Lattice& l) { return is_integral(l.gram()); }

bool is_even(const Lattice& l) {
  const RatMatrix& g = l.gram();
  if (!is_integral(g)) return false;
  for (std::size_t i = 0; i < g.rows(); ++i)
    if (g(i, i).get_num() % 2 != 0) return false;
  return true;
}

bool is_unimodular(const Lattice& l) { return is_integral(l) && determinant(l) == 1; }

int extremal_bound(int n) {
  if (n < 1) throw InputError("extremal_bound: dimension must be positive");
  return 2 + 2 * (n / 24);
}

bool same_lattice(const Lattice& a, const Lattice& b) {
  if (!a.shares_ambient(b) || a.rank() != b.rank()) return false;
  return canonical_rows(a.basis()) == canonical_rows(b.basis());
}

bool is_sublattice(const Lattice& a, const Lattice& b) {
  if (!a.shares_ambient(b)) return false;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (!b.contains(a.basis().row(i))) return false;
  return true;
}

Integer sublattice_index(const Lattice& a, const Lattice& b) {
  if (a.rank() != b.rank() || !is_sublattice(a, b)) throw InputError("sublattice_index: not a full-rank sublattice");
  RatMatrix coords(a.rank(), b.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) coords.set_row(i, *b.coordinates(a.basis().row(i)));
  Rational d = determinant(coords);
  if (!is_integer(d)) throw VerificationFailure("sublattice_index: non-integral index");
  return abs(d.get_num());
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  if (!a.shares_ambient(b)) throw InputError("lattice_sum: ambient spaces differ");
  RatMatrix gens = a.basis();
  for (std::size_t i = 0; i < b.rank(); ++i) gens.append_row(b.basis().row(i));
  return Lattice::generated_in(a, gens);
}

Lattice lattice_sum(const Lattice& a, std::span<const AmbientVector> vectors) {
  RatMatrix gens = a.basis();
  for (const auto& v : vectors) {
    if (v.size() != a.ambient_dim()) throw InputError("lattice_sum: vector length mismatch");
    gens.append_row(v);
  }
  return Lattice::generated_in(a, gens);
}

Lattice lattice_intersection(const Lattice& a, const Lattice& b) {
  if (!a.shares_ambient(b)) throw InputError("lattice_intersection: ambient spaces differ");
  // Integer pairs (x, y) with x A = y B, read off from the left kernel of [A; -B].
  RatMatrix stacked = a.basis();
  for (std::size_t i = 0; i < b.rank(); ++i) {
    auto r = b.basis().row(i);
    for (auto& q : r) q = -q;
    stacked.append_row(r);
  }
  Integer d = common_denominator(stacked);
  IntMatrix s(stacked.rows(), stacked.cols());
  for (std::size_t i = 0; i < stacked.rows(); ++i)
    for (std::size_t j = 0; j < stacked.cols(); ++j) s(i, j) = Rational(stacked(i, j) * d).get_num();
  IntMatrix k = integer_left_kernel(s);
  if (k.rows() == 0) throw InputError("lattice_intersection: intersection is the zero lattice");
  RatMatrix gens(k.rows(), a.ambient_dim());
  for (std::size_t r = 0; r < k.rows(); ++r) {
    IntVector x(a.rank());
    for (std::size_t i = 0; i < a.rank(); ++i) x[i] = k(r, i);
    gens.set_row(r, a.vector(x));
  }
  return Lattice::generated_in(a, gens);
}

Lattice scaled(const Lattice& l, const Rational& c) {
  if (c <= 0) throw InputError("scale factor must be positive");
  return Lattice(l.basis(), scale(l.ambient_form(), c), l.label());
}

Lattice orthogonal_sum(const Lattice& a, const Lattice& b) {
  RatMatrix basis = block_diagonal(a.basis(), b.basis());
  RatMatrix form = block_diagonal(a.ambient_form(), b.ambient_form());
  std::string label;
  if (!a.label().empty() && !b.label().empty()) label = a.label() + "+" + b.label();
  return Lattice(std::move(basis), std::move(form), std::move(label));
}

AmbientVector join_vectors(const AmbientVector& x, const AmbientVector& y) {
  AmbientVector v = x;
  v.insert(v.end(), y.begin(), y.end());
  return v;
}

}  // namespace latt
