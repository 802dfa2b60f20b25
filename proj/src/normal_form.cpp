#include "latt/normal_form.hpp"

#include <utility>

namespace latt {

namespace {

// rows (a, b) <- (s*a + t*b, -(vb/g)*a + (va/g)*b), a 2x2 unimodular step zeroing b's entry.
void combine_rows(IntMatrix& m, std::size_t a, std::size_t b, const Integer& s, const Integer& t,
                  const Integer& u, const Integer& v) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Integer x = m(a, j), y = m(b, j);
    m(a, j) = s * x + t * y;
    m(b, j) = u * x + v * y;
  }
}

void combine_cols(IntMatrix& m, std::size_t a, std::size_t b, const Integer& s, const Integer& t,
                  const Integer& u, const Integer& v) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer x = m(i, a), y = m(i, b);
    m(i, a) = s * x + t * y;
    m(i, b) = u * x + v * y;
  }
}

void add_row_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  if (f == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += f * m(src, j);
}

void add_col_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  if (f == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += f * m(i, src);
}

void negate_row(IntMatrix& m, std::size_t r) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

}  // namespace

HermiteForm hermite_normal_form(const IntMatrix& a, bool with_transform) {
  IntMatrix h = a;
  const std::size_t rows = h.rows(), cols = h.cols();
  IntMatrix u = with_transform ? IntMatrix::identity(rows) : IntMatrix();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (h(i, c) == 0) continue;
      if (h(r, c) == 0) {
        h.swap_rows(r, i);
        if (with_transform) u.swap_rows(r, i);
        continue;
      }
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h(r, c).get_mpz_t(), h(i, c).get_mpz_t());
      Integer va = h(r, c) / g, vb = h(i, c) / g;
      combine_rows(h, r, i, s, t, -vb, va);
      if (with_transform) combine_rows(u, r, i, s, t, -vb, va);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      negate_row(h, r);
      if (with_transform) negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(h(i, c), h(r, c));
      add_row_multiple(h, i, r, -q);
      if (with_transform) add_row_multiple(u, i, r, -q);
    }
    ++r;
  }
  HermiteForm out;
  out.rank = r;
  out.h = IntMatrix(r, cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j) out.h(i, j) = h(i, j);
  out.transform = std::move(u);
  return out;
}

IntMatrix integer_left_kernel(const IntMatrix& a) {
  HermiteForm hf = hermite_normal_form(a, true);
  IntMatrix k(a.rows() - hf.rank, a.rows());
  for (std::size_t i = hf.rank; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.rows(); ++j) k(i - hf.rank, j) = hf.transform(i, j);
  // Canonicalize the kernel basis itself.
  if (k.rows() > 0) k = hermite_normal_form(k).h;
  return k;
}

SmithForm smith_normal_form(const IntMatrix& m) {
  IntMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  IntMatrix left = IntMatrix::identity(rows);
  IntMatrix right = IntMatrix::identity(cols);
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Pivot: nonzero entry of least absolute value in the trailing block.
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a(i, j) != 0 && (pi == rows || abs(a(i, j)) < abs(a(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    a.swap_rows(t, pi);
    left.swap_rows(t, pi);
    swap_cols(a, t, pj);
    swap_cols(right, t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        if (a(i, t) % a(t, t) == 0) {
          Integer q = a(i, t) / a(t, t);
          add_row_multiple(a, i, t, -q);
          add_row_multiple(left, i, t, -q);
          continue;
        }
        Integer g, s, tt;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), tt.get_mpz_t(), a(t, t).get_mpz_t(), a(i, t).get_mpz_t());
        Integer va = a(t, t) / g, vb = a(i, t) / g;
        combine_rows(a, t, i, s, tt, -vb, va);
        combine_rows(left, t, i, s, tt, -vb, va);
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        clean = false;
        if (a(t, j) % a(t, t) == 0) {
          Integer q = a(t, j) / a(t, t);
          add_col_multiple(a, j, t, -q);
          add_col_multiple(right, j, t, -q);
          continue;
        }
        Integer g, s, tt;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), tt.get_mpz_t(), a(t, t).get_mpz_t(), a(t, j).get_mpz_t());
        Integer va = a(t, t) / g, vb = a(t, j) / g;
        combine_cols(a, t, j, s, tt, -vb, va);
        combine_cols(right, t, j, s, tt, -vb, va);
      }
      if (!clean) continue;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (a(i, t) != 0) clean = false;
      if (!clean) continue;
      // Divisibility: fold any offending row into the pivot row and redo.
      for (std::size_t i = t + 1; i < rows && clean; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(i, j) % a(t, t) != 0) {
            add_row_multiple(a, t, i, 1);
            add_row_multiple(left, t, i, 1);
            clean = false;
            break;
          }
    }
    if (a(t, t) < 0) {
      negate_row(a, t);
      negate_row(left, t);
    }
    ++t;
  }
  SmithForm out;
  for (std::size_t i = 0; i < t; ++i) out.divisors.push_back(a(i, i));
  out.left = std::move(left);
  out.right = std::move(right);
  return out;
}

SmithForm smith_normal_form(const RatMatrix& m) {
  if (!is_integral(m)) throw InputError("smith_normal_form: matrix has non-integral entries");
  return smith_normal_form(to_integer(m));
}

}  // namespace latt
