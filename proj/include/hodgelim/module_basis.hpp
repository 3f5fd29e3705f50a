#pragma once

// Degree-by-degree construction of reduced bases for submodules of Q[t]^n
// cut out by polynomial equations (m v = 0) and fiber conditions at finite
// points (C v(x) = 0). Every kernel, saturation, quotient and condition
// subsheaf in the library is computed here.
//
// With a shift vector s, the shifted degree of v is max_i (deg v_i - s_i).
// At each shifted degree d the space M_d of module elements of shifted
// degree <= d is a finite-dimensional Q-space; new basis vectors are taken
// from a complement of the span of t^e b for previously chosen b. The
// result generates every M_d, hence the module, and its degree list is
// minimal, hence it is shift-reduced (full-rank leading coefficient matrix).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hodgelim/matrix.hpp"

namespace hodgelim {

struct PointCondition {
  Rat point;
  RatMatrix rows;  // each row r imposes r . v(point) = 0
};

struct ModuleProblem {
  std::size_t n = 0;
  std::vector<int> shift;  // empty means all zero
  PolyMatrix equations;    // may have zero rows
  std::vector<PointCondition> conditions;
};

struct ReducedBasis {
  std::vector<PolyVector> basis;  // ordered by non-decreasing shifted degree
  std::vector<int> degrees;       // shifted degree of each basis vector

  [[nodiscard]] PolyMatrix matrix(std::size_t n) const { return columns_to_matrix(basis, n); }
};

namespace detail {

struct CoeffLayout {
  std::vector<int> bound;  // component i carries coefficients 0..bound[i]
  std::vector<std::size_t> offset;
  std::size_t total = 0;

  CoeffLayout(const std::vector<int>& shift, int d) {
    bound.resize(shift.size());
    offset.resize(shift.size());
    for (std::size_t i = 0; i < shift.size(); ++i) {
      bound[i] = d + shift[i];
      offset[i] = total;
      if (bound[i] >= 0) total += static_cast<std::size_t>(bound[i]) + 1;
    }
  }
  [[nodiscard]] std::vector<Rat> flatten(const PolyVector& v) const {
    std::vector<Rat> z(total, Rat(0));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_zero()) continue;
      if (!v[i].degree_at_most(bound[i])) throw std::logic_error("CoeffLayout: degree overflow");
      for (int a = 0; a <= *v[i].degree(); ++a) z[offset[i] + static_cast<std::size_t>(a)] = v[i].coeff(a);
    }
    return z;
  }
  [[nodiscard]] PolyVector unflatten(const RatMatrix& z, std::size_t col) const {
    PolyVector v(bound.size());
    for (std::size_t i = 0; i < bound.size(); ++i) {
      if (bound[i] < 0) continue;
      std::vector<Rat> cs(static_cast<std::size_t>(bound[i]) + 1);
      for (int a = 0; a <= bound[i]; ++a) cs[static_cast<std::size_t>(a)] = z(offset[i] + static_cast<std::size_t>(a), col);
      v[i] = Poly(std::move(cs));
    }
    return v;
  }
};

// Linear constraints on the coefficient vector for "m v = 0".
inline void append_equation_rows(const PolyMatrix& m, const CoeffLayout& lay, std::vector<std::vector<Rat>>& out) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    int maxk = -1;
    for (std::size_t i = 0; i < m.cols(); ++i)
      if (!m(r, i).is_zero() && lay.bound[i] >= 0) maxk = std::max(maxk, *m(r, i).degree() + lay.bound[i]);
    for (int k = 0; k <= maxk; ++k) {
      std::vector<Rat> row(lay.total, Rat(0));
      bool nonzero = false;
      for (std::size_t i = 0; i < m.cols(); ++i) {
        const Poly& p = m(r, i);
        if (p.is_zero() || lay.bound[i] < 0) continue;
        for (int a = 0; a <= *p.degree(); ++a) {
          const int b = k - a;
          if (b < 0 || b > lay.bound[i]) continue;
          if (p.coeff(a).is_zero()) continue;
          row[lay.offset[i] + static_cast<std::size_t>(b)] = p.coeff(a);
          nonzero = true;
        }
      }
      if (nonzero) out.push_back(std::move(row));
    }
  }
}

inline void append_point_rows(const PointCondition& pc, const CoeffLayout& lay, std::vector<std::vector<Rat>>& out) {
  for (std::size_t r = 0; r < pc.rows.rows(); ++r) {
    std::vector<Rat> row(lay.total, Rat(0));
    bool nonzero = false;
    for (std::size_t i = 0; i < pc.rows.cols(); ++i) {
      if (pc.rows(r, i).is_zero() || lay.bound[i] < 0) continue;
      Rat xp(1);
      for (int a = 0; a <= lay.bound[i]; ++a) {
        row[lay.offset[i] + static_cast<std::size_t>(a)] = pc.rows(r, i) * xp;
        xp *= pc.point;
      }
      nonzero = true;
    }
    if (nonzero) out.push_back(std::move(row));
  }
}

inline RatMatrix rows_to_matrix(const std::vector<std::vector<Rat>>& rows, std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace detail

inline ReducedBasis reduced_basis(const ModuleProblem& prob, int max_extra_degree = 256) {
  const std::size_t n = prob.n;
  std::vector<int> shift = prob.shift.empty() ? std::vector<int>(n, 0) : prob.shift;
  if (shift.size() != n) throw std::invalid_argument("reduced_basis: shift size mismatch");
  if (prob.equations.rows() > 0 && prob.equations.cols() != n)
    throw std::invalid_argument("reduced_basis: equation width mismatch");
  for (const auto& pc : prob.conditions)
    if (pc.rows.rows() > 0 && pc.rows.cols() != n) throw std::invalid_argument("reduced_basis: condition width mismatch");

  ReducedBasis out;
  if (n == 0) return out;
  const std::size_t target = n - poly_rank(prob.equations);
  if (target == 0) return out;

  const int d0 = -*std::max_element(shift.begin(), shift.end());
  for (int d = d0; out.basis.size() < target; ++d) {
    if (d > d0 + max_extra_degree) throw std::runtime_error("reduced_basis: degree guard exceeded");
    detail::CoeffLayout lay(shift, d);
    std::vector<std::vector<Rat>> rows;
    detail::append_equation_rows(prob.equations, lay, rows);
    for (const auto& pc : prob.conditions) detail::append_point_rows(pc, lay, rows);
    RatMatrix space = nullspace(detail::rows_to_matrix(rows, lay.total));
    if (space.cols() == 0) continue;

    // span of t^e b for earlier basis vectors
    RatMatrix shifts(lay.total, 0);
    std::size_t nshift = 0;
    for (std::size_t j = 0; j < out.basis.size(); ++j) {
      for (int e = 0; e <= d - out.degrees[j]; ++e) {
        PolyVector v = out.basis[j];
        for (auto& p : v) p = p.shifted(e);
        shifts = shifts.hcat(RatMatrix::column(lay.flatten(v)));
        ++nshift;
      }
    }
    if (space.cols() == nshift) continue;
    RatMatrix both = shifts.hcat(space);
    Rref rr = rref(both);
    for (auto c : rr.pivots) {
      if (c < nshift) continue;
      out.basis.push_back(lay.unflatten(space, c - nshift));
      out.degrees.push_back(d);
      if (out.basis.size() == target) break;
    }
  }
  return out;
}

// Minimal polynomial basis of {v : m v = 0}, as the columns of the result
// (n x 0 when the kernel is zero).
inline PolyMatrix minimal_kernel_basis(const PolyMatrix& m, const std::vector<int>& shift = {}) {
  ModuleProblem prob;
  prob.n = m.cols();
  prob.shift = shift;
  prob.equations = m;
  return reduced_basis(prob).matrix(m.cols());
}

// Solve m c = y with deg c_j <= bounds[j] (negative bound forces c_j = 0).
inline std::optional<PolyVector> solve_bounded(const PolyMatrix& m, const PolyVector& y, const std::vector<int>& bounds) {
  if (y.size() != m.rows() || bounds.size() != m.cols()) throw std::invalid_argument("solve_bounded: size mismatch");
  detail::CoeffLayout lay(bounds, 0);
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    int maxk = y[r].is_zero() ? -1 : *y[r].degree();
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(r, j).is_zero() && lay.bound[j] >= 0) maxk = std::max(maxk, *m(r, j).degree() + lay.bound[j]);
    for (int k = 0; k <= maxk; ++k) {
      std::vector<Rat> row(lay.total, Rat(0));
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const Poly& p = m(r, j);
        if (p.is_zero() || lay.bound[j] < 0) continue;
        for (int a = 0; a <= *p.degree(); ++a) {
          const int b = k - a;
          if (b < 0 || b > lay.bound[j]) continue;
          row[lay.offset[j] + static_cast<std::size_t>(b)] = p.coeff(a);
        }
      }
      rows.push_back(std::move(row));
      rhs.push_back(y[r].coeff(k));
    }
  }
  if (lay.total == 0) {
    for (const auto& v : rhs)
      if (!v.is_zero()) return std::nullopt;
    return PolyVector(m.cols());
  }
  auto x = solve(detail::rows_to_matrix(rows, lay.total), rhs);
  if (!x) return std::nullopt;
  return lay.unflatten(RatMatrix::column(*x), 0);
}

// Polynomial preimage of y under a map that is surjective on every finite
// fiber; the degree bound is raised until a solution appears.
inline PolyVector lift_through(const PolyMatrix& m, const PolyVector& y, int max_degree = 64) {
  for (int d = 0; d <= max_degree; ++d) {
    auto sol = solve_bounded(m, y, std::vector<int>(m.cols(), d));
    if (sol) return *sol;
  }
  throw std::runtime_error("lift_through: no polynomial preimage within degree guard");
}

}  // namespace hodgelim
