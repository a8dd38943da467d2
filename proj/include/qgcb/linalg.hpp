#pragma once

// Dense exact linear algebra over a field (RatFunc or Rational).

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgcb/errors.hpp"
#include "qgcb/scalars.hpp"

namespace qgcb {

template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  F& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const F& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<F> column(std::size_t c) const {
    std::vector<F> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }
  void set_column(std::size_t c, const std::vector<F>& v) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = F(1);
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> data_;
};

template <class F>
Matrix<F> operator*(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() != b.rows()) throw DomainError("matrix product: shape mismatch");
  Matrix<F> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!is_zero(b(k, j))) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

template <class F>
std::vector<F> operator*(const Matrix<F>& a, const std::vector<F>& v) {
  if (a.cols() != v.size()) throw DomainError("matrix-vector product: shape mismatch");
  std::vector<F> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (!is_zero(a(i, k)) && !is_zero(v[k])) out[i] += a(i, k) * v[k];
  return out;
}

template <class F>
struct Echelon {
  Matrix<F> reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
  std::size_t rank() const { return pivots.size(); }
};

/// Gauss-Jordan elimination; pivots are the leftmost independent columns.
template <class F>
Echelon<F> row_reduce(Matrix<F> m) {
  Echelon<F> e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && is_zero(m(piv, col))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    F inv = F(1) / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c)
      if (!is_zero(m(row, c))) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || is_zero(m(r, col))) continue;
      F factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (!is_zero(m(row, c))) m(r, c) -= factor * m(row, c);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.reduced = std::move(m);
  return e;
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  return row_reduce(m).rank();
}

/// Solves A X = B for the unique X. Throws InvariantViolation when A lacks
/// full column rank or the system is inconsistent; `what` names the caller.
template <class F>
Matrix<F> solve_unique(const Matrix<F>& a, const Matrix<F>& b, const std::string& what) {
  if (a.rows() != b.rows()) throw DomainError(what + ": shape mismatch");
  const std::size_t n = a.cols();
  Matrix<F> aug(a.rows(), n + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) aug(r, n + c) = b(r, c);
  }
  auto e = row_reduce(std::move(aug));
  std::size_t lhs_rank = 0;
  for (auto p : e.pivots) {
    if (p >= n) throw InvariantViolation(what + ": inconsistent linear system");
    ++lhs_rank;
  }
  if (lhs_rank != n) throw InvariantViolation(what + ": rank-deficient linear system");
  Matrix<F> x(n, b.cols());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) x(e.pivots[r], c) = e.reduced(r, n + c);
  return x;
}

/// Same as solve_unique but returns nullopt for an inconsistent system
/// (rank deficiency still throws).
template <class F>
std::optional<Matrix<F>> try_solve_unique(const Matrix<F>& a, const Matrix<F>& b, const std::string& what) {
  try {
    return solve_unique(a, b, what);
  } catch (const InvariantViolation& ex) {
    if (std::string(ex.what()).find("inconsistent") != std::string::npos) return std::nullopt;
    throw;
  }
}

template <class F>
Matrix<F> inverse(const Matrix<F>& a, const std::string& what) {
  if (a.rows() != a.cols()) throw DomainError(what + ": inverse of non-square matrix");
  return solve_unique(a, Matrix<F>::identity(a.rows()), what);
}

template <class F>
F determinant(Matrix<F> m) {
  if (m.rows() != m.cols()) throw DomainError("determinant of non-square matrix");
  F det(1);
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && is_zero(m(piv, col))) ++piv;
    if (piv == n) return F(0);
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(piv, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    F inv = F(1) / m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero(m(r, col))) continue;
      F factor = m(r, col) * inv;
      for (std::size_t c = col; c < n; ++c)
        if (!is_zero(m(col, c))) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

}  // namespace qgcb
