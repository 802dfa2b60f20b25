#include "latt/autotype.hpp"

#include "latt/normal_form.hpp"

namespace latt {

namespace {

IntMatrix minus_identity(const IntMatrix& m) {
  IntMatrix r = m;
  for (std::size_t i = 0; i < m.rows(); ++i) r(i, i) -= 1;
  return r;
}

std::optional<Lattice> sublattice_from_coords(const Lattice& l, const IntMatrix& coords) {
  if (coords.rows() == 0) return std::nullopt;
  return Lattice::generated_in(l, to_rational(coords) * l.basis());
}

bool is_power_of(Integer x, std::int64_t p, std::size_t& exponent) {
  exponent = 0;
  if (x <= 0) return false;
  while (x % p == 0) {
    x /= p;
    ++exponent;
  }
  return x == 1;
}

}  // namespace

std::string AutType::to_string() const {
  return std::to_string(p) + "-(" + std::to_string(z) + "," + std::to_string(d) + ")-" + std::to_string(s);
}

std::optional<std::int64_t> matrix_order(const IntMatrix& m, std::int64_t limit) {
  if (m.rows() != m.cols()) throw InputError("matrix_order: matrix is not square");
  const IntMatrix one = IntMatrix::identity(m.rows());
  IntMatrix power = m;
  for (std::int64_t k = 1; k <= limit; ++k) {
    if (power == one) return k;
    power = power * m;
  }
  return std::nullopt;
}

IntMatrix coordinate_action(const Lattice& l, const RatMatrix& ambient_map) {
  if (ambient_map.rows() != l.ambient_dim() || ambient_map.cols() != l.ambient_dim())
    throw InputError("ambient map has the wrong shape");
  RatMatrix images = l.basis() * ambient_map;
  IntMatrix out(l.rank(), l.rank());
  for (std::size_t i = 0; i < l.rank(); ++i) {
    auto c = l.coordinates(images.row(i));
    if (!c || !is_integral(*c)) throw InputError("ambient map does not preserve the lattice");
    out.set_row(i, to_integer(*c));
  }
  return out;
}

TypeDecomposition decompose(const Lattice& l, const Isometry& sigma) { return decompose(l, sigma.matrix()); }

TypeDecomposition decompose(const Lattice& l, const IntMatrix& sigma) {
  const std::size_t n = l.rank();
  if (sigma.rows() != n || sigma.cols() != n) throw InputError("decompose: sigma has the wrong shape");
  if (!preserves_gram(sigma, l.gram(), l.gram())) throw InputError("decompose: sigma is not an isometry of L");
  auto ord = matrix_order(sigma, 1 << 12);
  if (!ord || !is_prime(*ord)) throw InputError("decompose: sigma does not have prime order");
  const std::int64_t p = *ord;

  TypeDecomposition dec;
  dec.sigma = sigma;
  dec.fixed_coords = integer_left_kernel(minus_identity(sigma));
  IntMatrix norm_element(n, n), power = IntMatrix::identity(n);
  for (std::int64_t k = 0; k < p; ++k) {
    norm_element = norm_element + power;
    power = power * sigma;
  }
  dec.image_coords = integer_left_kernel(norm_element);
  dec.fixed_lattice = sublattice_from_coords(l, dec.fixed_coords);
  dec.image_lattice = sublattice_from_coords(l, dec.image_coords);

  const std::size_t d = dec.fixed_coords.rows(), ir = dec.image_coords.rows();
  if (d + ir != n || ir % static_cast<std::size_t>(p - 1) != 0)
    throw VerificationFailure("decompose: fixed and image ranks are inconsistent");
  const std::size_t z = ir / static_cast<std::size_t>(p - 1);

  // Sigma preserves both sublattices; on the fixed part it is the identity.
  for (std::size_t i = 0; i < d; ++i) {
    IntVector x = dec.fixed_coords.row(i);
    if (x * sigma != x) throw VerificationFailure("decompose: sigma moves a fixed vector");
  }
  if (ir > 0) {
    RatMatrix img = to_rational(dec.image_coords * sigma) * l.basis();
    for (std::size_t i = 0; i < ir; ++i)
      if (!dec.image_lattice->contains(img.row(i))) throw VerificationFailure("decompose: image lattice not invariant");
  }

  IntMatrix stacked(0, n);
  for (std::size_t i = 0; i < d; ++i) stacked.append_row(dec.fixed_coords.row(i));
  for (std::size_t i = 0; i < ir; ++i) stacked.append_row(dec.image_coords.row(i));
  dec.index = abs(determinant(stacked));
  std::size_t s = 0;
  if (!is_power_of(dec.index, p, s)) throw VerificationFailure("decompose: index is not a power of p");
  if (s > std::min(z, d)) throw VerificationFailure("decompose: index exponent exceeds min(z, d)");
  dec.type = AutType{p, z, d, s};
  if (n != d + z * static_cast<std::size_t>(p - 1)) throw VerificationFailure("decompose: n != d + z(p-1)");
  return dec;
}

UnimodularTypeChecks check_unimodular_type(const Lattice& l, const TypeDecomposition& dec) {
  if (!is_even(l) || !is_unimodular(l)) throw InputError("the lattice is not even unimodular");
  const std::int64_t p = dec.type.p;
  auto elementary = [&](const std::optional<Lattice>& m) {
    if (!m) return dec.type.s == 0;
    DiscriminantGroup g = discriminant_group(*m);
    if (dec.type.s == 0) return g.is_trivial();
    return g.is_elementary(p) && g.rank() == dec.type.s;
  };
  UnimodularTypeChecks r;
  r.fixed_elementary = elementary(dec.fixed_lattice);
  r.image_elementary = elementary(dec.image_lattice);
  r.dual_applicable = dec.type.s == dec.type.z && dec.image_lattice.has_value();
  if (r.dual_applicable) {
    Lattice rescaled = scaled(dual_lattice(*dec.image_lattice), Rational(p));
    // For p = 2 the trace form is the form itself, so only integrality can be asked for.
    r.dual_even = p == 2 ? is_integral(rescaled) : is_even(rescaled);
    Integer pw = 1;
    for (std::size_t k = 0; k < dec.type.z * static_cast<std::size_t>(p - 1); ++k) pw *= p;
    r.dual_determinant = determinant(rescaled) == Rational(pw) / determinant(*dec.image_lattice);
  }
  return r;
}

EvennessTypeChecks check_evenness_type(const Lattice& l, const TypeDecomposition& dec) {
  if (dec.type.p == 2) throw InputError("evenness checks need an odd prime");
  if (!is_even(l)) throw InputError("the lattice is not even");
  EvennessTypeChecks r;
  r.fixed_even = !dec.fixed_lattice || is_even(*dec.fixed_lattice);
  r.image_even = !dec.image_lattice || is_even(*dec.image_lattice);
  return r;
}

// --- Cyclotomic integers -------------------------------------------------------

Cyclotomic cyclotomic_reduce(std::int64_t p, const std::vector<Integer>& coeffs) {
  // Fold exponents mod p, then eliminate zeta^(p-1) = -(1 + ... + zeta^(p-2)).
  std::vector<Integer> full(static_cast<std::size_t>(p), 0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) full[k % static_cast<std::size_t>(p)] += coeffs[k];
  Cyclotomic out(static_cast<std::size_t>(p - 1));
  for (std::size_t k = 0; k + 1 < full.size(); ++k) out[k] = full[k] - full[p - 1];
  return out;
}

Cyclotomic cyclotomic_conjugate(std::int64_t p, const Cyclotomic& a) {
  std::vector<Integer> full(static_cast<std::size_t>(p), 0);
  for (std::size_t k = 0; k < a.size(); ++k) full[(static_cast<std::size_t>(p) - k) % static_cast<std::size_t>(p)] += a[k];
  return cyclotomic_reduce(p, full);
}

Cyclotomic cyclotomic_multiply(std::int64_t p, const Cyclotomic& a, const Cyclotomic& b) {
  std::vector<Integer> full(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) full[i + j] += a[i] * b[j];
  return cyclotomic_reduce(p, full);
}

Cyclotomic cyclotomic_zeta_power(std::int64_t p, std::int64_t k) {
  std::vector<Integer> full(static_cast<std::size_t>(p), 0);
  full[static_cast<std::size_t>(((k % p) + p) % p)] = 1;
  return cyclotomic_reduce(p, full);
}

Integer cyclotomic_trace(std::int64_t p, const Cyclotomic& a) {
  Integer t = a.empty() ? Integer(0) : a[0] * (p - 1);
  for (std::size_t k = 1; k < a.size(); ++k) t -= a[k];
  return t;
}

CyclotomicMatrix::CyclotomicMatrix(std::int64_t p, std::vector<std::vector<Cyclotomic>> entries)
    : p_(p), entries_(std::move(entries)) {
  if (!is_prime(p)) throw InputError("cyclotomic matrix: p is not prime");
  const std::size_t z = entries_.size();
  if (z == 0) throw InputError("cyclotomic matrix is empty");
  for (auto& row : entries_) {
    if (row.size() != z) throw InputError("cyclotomic matrix is not square");
    for (auto& e : row) {
      if (e.size() > static_cast<std::size_t>(p - 1)) throw InputError("cyclotomic entry has too many coefficients");
      e.resize(static_cast<std::size_t>(p - 1), 0);
    }
  }
  for (std::size_t i = 0; i < z; ++i)
    for (std::size_t j = 0; j < z; ++j)
      if (entries_[j][i] != cyclotomic_conjugate(p, entries_[i][j]))
        throw InputError("cyclotomic matrix is not Hermitian");
}

Lattice hermitian_trace_lattice(const CyclotomicMatrix& h, const Rational& scale) {
  const std::int64_t p = h.p();
  const std::size_t z = h.size(), w = static_cast<std::size_t>(p - 1), n = z * w;
  RatMatrix g(n, n);
  for (std::size_t i = 0; i < z; ++i)
    for (std::size_t j = 0; j < z; ++j)
      for (std::size_t k = 0; k < w; ++k)
        for (std::size_t l = 0; l < w; ++l) {
          // h(zeta^k e_i, zeta^l e_j) = zeta^(k-l) h_ij
          Cyclotomic v = cyclotomic_multiply(p, cyclotomic_zeta_power(p, static_cast<std::int64_t>(k) - static_cast<std::int64_t>(l)), h(i, j));
          g(i * w + k, j * w + l) = scale * Rational(cyclotomic_trace(p, v));
        }
  if (!is_positive_definite(g)) throw InputError("Hermitian form is not positive definite");
  return Lattice::from_gram(g);
}

}  // namespace latt
