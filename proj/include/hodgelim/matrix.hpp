#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hodgelim/poly.hpp"
#include "hodgelim/rational.hpp"

namespace hodgelim {

// Dense row-major matrix over a ring-like scalar.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("Matrix: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static Matrix column(const std::vector<T>& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::vector<T> col(std::size_t j) const {
    std::vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  [[nodiscard]] std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  [[nodiscard]] Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  [[nodiscard]] Matrix select_cols(const std::vector<std::size_t>& idx) const {
    Matrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
  }
  [[nodiscard]] Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
    return m;
  }

  // Horizontal concatenation; an empty (0-column) side is allowed.
  [[nodiscard]] Matrix hcat(const Matrix& o) const {
    if (cols_ == 0) return o.cols_ == 0 ? Matrix(std::max(rows_, o.rows_), 0) : o;
    if (o.cols_ == 0) return *this;
    if (o.rows_ != rows_) throw std::invalid_argument("Matrix::hcat: row mismatch");
    Matrix m(rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < o.cols_; ++j) m(i, cols_ + j) = o(i, j);
    }
    return m;
  }
  [[nodiscard]] Matrix vcat(const Matrix& o) const {
    if (rows_ == 0) return o.rows_ == 0 ? Matrix(0, std::max(cols_, o.cols_)) : o;
    if (o.rows_ == 0) return *this;
    if (o.cols_ != cols_) throw std::invalid_argument("Matrix::vcat: column mismatch");
    Matrix m(rows_ + o.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t i = 0; i < o.rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(rows_ + i, j) = o(i, j);
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: product dimension mismatch");
    Matrix m(a.rows_, b.cols_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: sum mismatch");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: diff mismatch");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  [[nodiscard]] bool is_zero() const {
    for (const auto& x : data_)
      if (!(x == T(0))) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using RatMatrix = Matrix<Rat>;
using PolyMatrix = Matrix<Poly>;
using PolyVector = std::vector<Poly>;

// ---------------------------------------------------------------------------
// Linear algebra over Q.

struct Rref {
  RatMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

inline Rref rref(RatMatrix m) {
  Rref out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Rat inv = Rat(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Rat f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }

// Columns form a basis of {x : m x = 0}.
inline RatMatrix nullspace(const RatMatrix& m) {
  const std::size_t n = m.cols();
  Rref rr = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto c : rr.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free.push_back(c);
  RatMatrix basis(n, free.size(), Rat(0));
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis(free[k], k) = Rat(1);
    for (std::size_t i = 0; i < rr.pivots.size(); ++i)
      basis(rr.pivots[i], k) = -rr.reduced(i, free[k]);
  }
  return basis;
}

// Basis (as columns) of the column space of m.
inline RatMatrix column_basis(const RatMatrix& m) {
  if (m.cols() == 0) return RatMatrix(m.rows(), 0);
  Rref rr = rref(m);
  return m.select_cols(rr.pivots);
}

// Rows spanning the annihilator {y : y^T x = 0 for x in colspan(m)}, as a
// matrix whose rows are the annihilating functionals.
inline RatMatrix annihilator(const RatMatrix& cols, std::size_t ambient) {
  if (cols.cols() == 0) return RatMatrix::identity(ambient);
  return nullspace(cols.transpose()).transpose();
}

// Some x with m x = b, or nullopt.
inline std::optional<std::vector<Rat>> solve(const RatMatrix& m, const std::vector<Rat>& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: rhs size mismatch");
  RatMatrix aug = m.hcat(RatMatrix::column(b));
  Rref rr = rref(aug);
  if (!rr.pivots.empty() && rr.pivots.back() == m.cols()) return std::nullopt;
  std::vector<Rat> x(m.cols(), Rat(0));
  for (std::size_t i = 0; i < rr.pivots.size(); ++i) x[rr.pivots[i]] = rr.reduced(i, m.cols());
  return x;
}

inline RatMatrix evaluate(const PolyMatrix& m, const Rat& x) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).eval(x);
  return r;
}

inline PolyMatrix to_poly(const RatMatrix& m) {
  PolyMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Poly(m(i, j));
  return r;
}

inline PolyVector apply(const PolyMatrix& m, const PolyVector& v) {
  if (v.size() != m.cols()) throw std::invalid_argument("apply: size mismatch");
  PolyVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero() && !v[j].is_zero()) out[i] += m(i, j) * v[j];
  return out;
}

inline PolyMatrix columns_to_matrix(const std::vector<PolyVector>& cols, std::size_t rows) {
  PolyMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw std::invalid_argument("columns_to_matrix: size mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Fraction-free (Bareiss) elimination over Q[t]. Every division performed
// is exact, so no rational functions ever appear.

struct BareissResult {
  std::size_t rank = 0;
  Poly last_pivot;  // determinant of the leading rank x rank minor (up to sign)
};

inline BareissResult bareiss(PolyMatrix m) {
  BareissResult out;
  Poly prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    // prefer the pivot of smallest degree to limit coefficient growth
    std::optional<int> best;
    for (std::size_t i = r; i < m.rows(); ++i) {
      auto d = m(i, c).degree();
      if (d && (!best || *d < *best)) {
        best = d;
        p = i;
      }
    }
    if (!best) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      for (std::size_t j = c + 1; j < m.cols(); ++j)
        m(i, j) = exact_div(m(r, c) * m(i, j) - m(i, c) * m(r, j), prev);
      m(i, c) = Poly();
    }
    prev = m(r, c);
    ++r;
  }
  out.rank = r;
  out.last_pivot = prev;
  return out;
}

// Rank over the rational-function field Q(t).
inline std::size_t poly_rank(const PolyMatrix& m) {
  if (m.empty()) return 0;
  return bareiss(m).rank;
}

inline Poly poly_det(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("poly_det: non-square");
  if (m.rows() == 0) return Poly(1);
  // Track the sign of row swaps separately: recompute via cofactor-free
  // elimination on a copy with explicit sign bookkeeping.
  PolyMatrix a = m;
  const std::size_t n = a.rows();
  Poly prev(1);
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k).is_zero()) ++p;
    if (p == n) return Poly();
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = exact_div(a(k, k) * a(i, j) - a(i, k) * a(k, j), prev);
      a(i, k) = Poly();
    }
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : -a(n - 1, n - 1);
}

namespace detail {
inline void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}
}  // namespace detail

inline std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  detail::combinations(n, k, 0, cur, out);
  return out;
}

// Monic gcd of all s x s minors; 0 when every minor vanishes.
inline Poly minor_gcd(const PolyMatrix& m, std::size_t s) {
  if (s == 0 || s > std::min(m.rows(), m.cols()))
    throw std::out_of_range("minor_gcd: minor size out of range");
  Poly g;
  for (const auto& rs : combinations(m.rows(), s)) {
    PolyMatrix sub_r = m.select_rows(rs);
    for (const auto& cs : combinations(m.cols(), s)) {
      g = poly_gcd(g, poly_det(sub_r.select_cols(cs)));
      if (g == Poly(1)) return g;
    }
  }
  return g;
}

}  // namespace hodgelim
