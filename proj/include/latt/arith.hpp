#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "latt/errors.hpp"

namespace latt {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den = 1);

// Parses "a", "-a/b" (decimal). Throws InputError.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

bool is_integer(const Rational& q);
Integer floor_div(const Integer& a, const Integer& b);
Integer floor(const Rational& q);
Integer round_nearest(const Rational& q);  // ties toward +infinity
// Representative of q mod Z in [0, 1).
Rational frac(const Rational& q);
// q mod m for positive rational modulus, result in [0, m).
Rational mod(const Rational& q, const Rational& m);

std::int64_t to_int64(const Integer& z);  // throws InputError on overflow
bool fits_int64(const Integer& z);
bool is_prime(std::int64_t p);

// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data);
  Matrix(std::initializer_list<std::initializer_list<T>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const;
  void set_row(std::size_t i, const std::vector<T>& values);
  void append_row(const std::vector<T>& values);
  void swap_rows(std::size_t a, std::size_t b);

  Matrix transpose() const;
  bool is_symmetric() const;

  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RatMatrix = Matrix<Rational>;
using IntMatrix = Matrix<Integer>;
using RatVector = std::vector<Rational>;
using IntVector = std::vector<Integer>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
Matrix<T> scale(const Matrix<T>& a, const T& c);

// Row vector times matrix.
template <class T>
std::vector<T> operator*(const std::vector<T>& v, const Matrix<T>& m);

RatMatrix to_rational(const IntMatrix& m);
RatVector to_rational(const IntVector& v);
bool is_integral(const RatMatrix& m);
bool is_integral(const RatVector& v);
// Requires integral entries.
IntMatrix to_integer(const RatMatrix& m);
IntVector to_integer(const RatVector& v);

// Least common multiple of all denominators.
Integer common_denominator(const RatMatrix& m);
Integer common_denominator(const RatVector& v);

Rational dot(const RatVector& a, const RatVector& b);
// a * form * b^T
Rational bilinear(const RatVector& a, const RatMatrix& form, const RatVector& b);

Rational determinant(const RatMatrix& m);
Integer determinant(const IntMatrix& m);
// Throws InputError if singular.
RatMatrix inverse(const RatMatrix& m);
std::size_t rank(const RatMatrix& m);
// Exact LDL^T pivots; positive definite iff all pivots are > 0.
bool is_positive_definite(const RatMatrix& m);

// Block-diagonal join.
template <class T>
Matrix<T> block_diagonal(const Matrix<T>& a, const Matrix<T>& b);

// Solves x * m = v for a row vector x when m has full row rank; false when v is
// outside the row space.
bool solve_row(const RatMatrix& m, const RatVector& v, RatVector& x);

std::string to_string(const RatMatrix& m);

}  // namespace latt
