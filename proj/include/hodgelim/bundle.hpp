#pragma once

// Vector bundles on P^1 in Grothendieck normal form and degree-bounded maps
// between them. A section of O(d) is a polynomial of degree <= d in the
// affine coordinate t; the fiber at infinity is read off from the
// coefficient of t^d.

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hodgelim/matrix.hpp"
#include "hodgelim/module_basis.hpp"

namespace hodgelim {

class SplitBundle {
 public:
  SplitBundle() = default;
  explicit SplitBundle(std::vector<int> degrees) : d_(std::move(degrees)) {
    std::sort(d_.begin(), d_.end(), std::greater<>());
  }
  static SplitBundle trivial(std::size_t rank) { return SplitBundle(std::vector<int>(rank, 0)); }

  [[nodiscard]] std::size_t rank() const { return d_.size(); }
  [[nodiscard]] int degree() const { return std::accumulate(d_.begin(), d_.end(), 0); }
  [[nodiscard]] const std::vector<int>& degrees() const { return d_; }
  [[nodiscard]] int operator[](std::size_t i) const { return d_[i]; }

  friend bool operator==(const SplitBundle&, const SplitBundle&) = default;

 private:
  std::vector<int> d_;
};

// Map source -> target (x) O(twist); entry (i,j) has degree at most
// target[i] + twist - source[j].
struct BundleMap {
  SplitBundle source;
  SplitBundle target;
  int twist = 0;
  PolyMatrix matrix;

  [[nodiscard]] int bound(std::size_t i, std::size_t j) const { return target[i] + twist - source[j]; }

  [[nodiscard]] bool respects_bounds() const {
    if (matrix.rows() != target.rank() || matrix.cols() != source.rank()) return false;
    for (std::size_t i = 0; i < matrix.rows(); ++i)
      for (std::size_t j = 0; j < matrix.cols(); ++j)
        if (!matrix(i, j).degree_at_most(bound(i, j))) return false;
    return true;
  }
  void validate() const {
    if (matrix.rows() != target.rank() || matrix.cols() != source.rank())
      throw std::invalid_argument("BundleMap: matrix shape does not match bundles");
    if (!respects_bounds()) throw std::invalid_argument("BundleMap: entry exceeds degree bound");
  }

  // Fiber map at infinity: coefficient of t^bound(i,j).
  [[nodiscard]] RatMatrix leading_matrix() const {
    RatMatrix q(matrix.rows(), matrix.cols(), Rat(0));
    for (std::size_t i = 0; i < matrix.rows(); ++i)
      for (std::size_t j = 0; j < matrix.cols(); ++j) {
        const int b = bound(i, j);
        if (b >= 0) q(i, j) = matrix(i, j).coeff(b);
      }
    return q;
  }

  static BundleMap zero(const SplitBundle& s, const SplitBundle& t, int twist = 0) {
    return {s, t, twist, PolyMatrix(t.rank(), s.rank())};
  }
  static BundleMap identity(const SplitBundle& b) {
    PolyMatrix m(b.rank(), b.rank());
    for (std::size_t i = 0; i < b.rank(); ++i) m(i, i) = Poly(1);
    return {b, b, 0, m};
  }
};

// g after f.
inline BundleMap compose(const BundleMap& g, const BundleMap& f) {
  if (!(g.source == f.target)) throw std::invalid_argument("compose: bundle mismatch");
  return {f.source, g.target, f.twist + g.twist, g.matrix * f.matrix};
}

struct SubbundleReport {
  bool full_rank = false;
  bool saturated_finite = false;
  bool saturated_infinity = false;
  Poly minor_gcd;  // finite degeneration locus (monic), 1 when saturated
  [[nodiscard]] bool valid() const { return full_rank && saturated_finite && saturated_infinity; }
  [[nodiscard]] std::string describe() const {
    if (valid()) return "valid";
    std::string s;
    if (!full_rank) s += "rank-deficient;";
    if (full_rank && !saturated_finite) {
      std::string g;
      for (std::size_t i = 0; i < minor_gcd.coeffs().size(); ++i) g += (i ? "," : "") + minor_gcd.coeffs()[i].str();
      s += "finite degeneration (minor gcd [" + g + "]);";
    }
    if (full_rank && !saturated_infinity) s += "degeneration at infinity;";
    return s;
  }
};

inline SubbundleReport check_subbundle(const BundleMap& m) {
  if (m.twist != 0) throw std::invalid_argument("check_subbundle: twist must be 0");
  m.validate();
  SubbundleReport rep;
  const std::size_t s = m.source.rank();
  if (s == 0) {
    rep.full_rank = rep.saturated_finite = rep.saturated_infinity = true;
    rep.minor_gcd = Poly(1);
    return rep;
  }
  rep.full_rank = poly_rank(m.matrix) == s;
  if (!rep.full_rank) return rep;
  rep.minor_gcd = minor_gcd(m.matrix, s);
  rep.saturated_finite = rep.minor_gcd == Poly(1);
  rep.saturated_infinity = rank(m.leading_matrix()) == s;
  return rep;
}

// A saturated subbundle, stored by its inclusion map (twist 0).
struct Subbundle {
  BundleMap inclusion;

  [[nodiscard]] const SplitBundle& bundle() const { return inclusion.source; }
  [[nodiscard]] const SplitBundle& ambient() const { return inclusion.target; }
  [[nodiscard]] std::size_t rank() const { return inclusion.source.rank(); }
  [[nodiscard]] int degree() const { return inclusion.source.degree(); }
  [[nodiscard]] const PolyMatrix& matrix() const { return inclusion.matrix; }

  static Subbundle whole(const SplitBundle& b) { return {BundleMap::identity(b)}; }
  static Subbundle zero(const SplitBundle& b) { return {BundleMap::zero(SplitBundle{}, b)}; }
};

namespace detail {

// Builds the subbundle from a shift-reduced basis whose shift is the
// ambient splitting type; source degrees are the negated shifted degrees.
inline Subbundle subbundle_from_basis(const SplitBundle& ambient, const ReducedBasis& rb) {
  std::vector<int> src;
  for (int d : rb.degrees) src.push_back(-d);
  // reduced_basis returns non-decreasing shifted degree, i.e. non-increasing
  // source degree, which is already canonical order
  PolyMatrix m = rb.matrix(ambient.rank());
  SplitBundle s(src);
  return {BundleMap{s, ambient, 0, m}};
}

}  // namespace detail

// Saturation of the column span of an arbitrary matrix with entries that
// are sections of the ambient bundle (rank-deficient input allowed).
inline Subbundle saturate_span(const SplitBundle& ambient, const PolyMatrix& cols) {
  if (cols.rows() != ambient.rank()) throw std::invalid_argument("saturate_span: row mismatch");
  ModuleProblem prob;
  prob.n = ambient.rank();
  prob.shift = ambient.degrees();
  if (cols.cols() > 0 && poly_rank(cols) > 0) {
    // equations: rows annihilating the span
    PolyMatrix ann = minimal_kernel_basis(cols.transpose());
    prob.equations = ann.transpose();
  } else {
    prob.equations = PolyMatrix::identity(ambient.rank());
    for (std::size_t i = 0; i < ambient.rank(); ++i) prob.equations(i, i) = Poly(1);
  }
  return detail::subbundle_from_basis(ambient, reduced_basis(prob));
}

// Unique saturated subbundle with the same generic fiber as the image of m.
inline Subbundle saturate(const BundleMap& m) {
  if (m.twist != 0) throw std::invalid_argument("saturate: twist must be 0");
  if (poly_rank(m.matrix) != m.source.rank()) throw std::invalid_argument("saturate: rank-deficient input");
  return saturate_span(m.target, m.matrix);
}

// Saturated subbundle of the source whose generic fiber is ker(m).
inline Subbundle kernel_subbundle(const BundleMap& m) {
  ModuleProblem prob;
  prob.n = m.source.rank();
  prob.shift = m.source.degrees();
  prob.equations = m.matrix;
  return detail::subbundle_from_basis(m.source, reduced_basis(prob));
}

struct Quotient {
  SplitBundle bundle;
  BundleMap projection;  // ambient -> bundle, fiberwise surjective
};

// Quotient through the dual: the annihilator of sub inside the dual bundle
// is a saturated subbundle whose dual is the quotient.
inline Quotient quotient(const Subbundle& sub) {
  const auto rep = check_subbundle(sub.inclusion);
  if (!rep.valid()) throw std::invalid_argument("quotient: invalid subbundle (" + rep.describe() + ")");
  const SplitBundle& amb = sub.ambient();
  ModuleProblem prob;
  prob.n = amb.rank();
  prob.shift.resize(amb.rank());
  for (std::size_t i = 0; i < amb.rank(); ++i) prob.shift[i] = -amb[i];
  if (sub.rank() > 0) prob.equations = sub.matrix().transpose();
  ReducedBasis rb = reduced_basis(prob);
  // quotient degree of each row = shifted degree; order non-increasing
  std::vector<std::size_t> order(rb.basis.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rb.degrees[a] > rb.degrees[b]; });
  std::vector<int> qdeg;
  PolyMatrix proj(rb.basis.size(), amb.rank());
  for (std::size_t r = 0; r < order.size(); ++r) {
    qdeg.push_back(rb.degrees[order[r]]);
    for (std::size_t i = 0; i < amb.rank(); ++i) proj(r, i) = rb.basis[order[r]][i];
  }
  SplitBundle q(qdeg);
  return {q, BundleMap{amb, q, 0, proj}};
}

// Coordinates c (polynomial) with sub * c = y, for y a section of the
// ambient bundle twisted by `twist` lying in the subbundle; nullopt when y
// is not in the span. Uses the predictable-degree property of reduced
// bases, so the degree bound is exact.
inline std::optional<PolyVector> coordinates_in(const Subbundle& sub, const PolyVector& y) {
  const SplitBundle& amb = sub.ambient();
  if (y.size() != amb.rank()) throw std::invalid_argument("coordinates_in: size mismatch");
  std::optional<int> delta;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i].is_zero()) continue;
    const int d = *y[i].degree() - amb[i];
    delta = delta ? std::max(*delta, d) : d;
  }
  if (!delta) return PolyVector(sub.rank());
  std::vector<int> bounds(sub.rank());
  for (std::size_t j = 0; j < sub.rank(); ++j) bounds[j] = *delta + sub.bundle()[j];
  return solve_bounded(sub.matrix(), y, bounds);
}

}  // namespace hodgelim
