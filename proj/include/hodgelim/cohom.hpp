#pragma once

// Hypercohomology of two-term complexes of split bundles on P^1, and the
// parabolic endomorphism complexes of a Fuchsian system and of its graded
// limits.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hodgelim/connection.hpp"
#include "hodgelim/module_basis.hpp"

namespace hodgelim {

// d: C0 -> C1, entry (i,j) of degree <= c1[i] - c0[j]. Degree lists are in
// the order of the matrix rows/columns (not necessarily sorted).
struct TwoTermComplex {
  std::vector<int> c0;
  std::vector<int> c1;
  PolyMatrix d;

  void validate() const {
    if (d.rows() != c1.size() || d.cols() != c0.size()) throw std::invalid_argument("complex: shape mismatch");
    for (std::size_t i = 0; i < c1.size(); ++i)
      for (std::size_t j = 0; j < c0.size(); ++j)
        if (!d(i, j).degree_at_most(c1[i] - c0[j])) throw std::invalid_argument("complex: differential exceeds degree bound");
  }
};

struct HyperDims {
  long h0 = 0, h1 = 0, h2 = 0;
  [[nodiscard]] long euler() const { return h0 - h1 + h2; }
  friend bool operator==(const HyperDims&, const HyperDims&) = default;
};

inline long h0_split(const std::vector<int>& d) {
  long s = 0;
  for (int x : d) s += std::max(0, x + 1);
  return s;
}
inline long h1_split(const std::vector<int>& d) {
  long s = 0;
  for (int x : d) s += std::max(0, -x - 1);
  return s;
}
inline long chi_split(const std::vector<int>& d) {
  long s = 0;
  for (int x : d) s += x + 1;
  return s;
}

// Matrix of the induced map on global sections, in monomial coordinates.
inline RatMatrix h0_map(const std::vector<int>& src, const std::vector<int>& tgt, const PolyMatrix& m) {
  std::vector<std::size_t> off(tgt.size());
  std::size_t rows = 0;
  for (std::size_t i = 0; i < tgt.size(); ++i) {
    off[i] = rows;
    rows += static_cast<std::size_t>(std::max(0, tgt[i] + 1));
  }
  std::vector<std::vector<Rat>> cols;
  for (std::size_t j = 0; j < src.size(); ++j)
    for (int e = 0; e <= src[j]; ++e) {
      std::vector<Rat> col(rows, Rat(0));
      for (std::size_t i = 0; i < tgt.size(); ++i) {
        const Poly& p = m(i, j);
        if (p.is_zero()) continue;
        for (int a = 0; a <= *p.degree(); ++a) {
          if (p.coeff(a).is_zero()) continue;
          if (a + e > tgt[i]) throw std::logic_error("h0_map: degree bound violated");
          col[off[i] + static_cast<std::size_t>(a + e)] = p.coeff(a);
        }
      }
      cols.push_back(std::move(col));
    }
  RatMatrix out(rows, cols.size(), Rat(0));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows; ++r) out(r, c) = cols[c][r];
  return out;
}

// h0 = ker H0(d), h2 = coker H1(d), h1 = coker H0(d) + ker H1(d). The map on
// H1 is read through Serre duality: its rank is the rank of H0 of the
// transpose between the duals twisted by K = O(-2).
inline HyperDims hyper_dims(const TwoTermComplex& c) {
  c.validate();
  const RatMatrix m0 = h0_map(c.c0, c.c1, c.d);
  std::vector<int> d0, d1;
  for (int x : c.c0) d0.push_back(-x - 2);
  for (int x : c.c1) d1.push_back(-x - 2);
  const RatMatrix m1 = h0_map(d1, d0, c.d.transpose());
  const long r0 = static_cast<long>(rank(m0)), r1 = static_cast<long>(rank(m1));
  HyperDims h;
  h.h0 = h0_split(c.c0) - r0;
  h.h2 = h1_split(c.c1) - r1;
  h.h1 = (h0_split(c.c1) - r0) + (h1_split(c.c0) - r1);
  return h;
}

inline long euler_characteristic(const TwoTermComplex& c) { return chi_split(c.c0) - chi_split(c.c1); }

// ---------------------------------------------------------------------------
// Condition sheaves inside direct sums of O(shift_i).

struct ConditionSheaf {
  std::vector<int> shift;
  ReducedBasis basis;

  [[nodiscard]] std::size_t ambient() const { return shift.size(); }
  [[nodiscard]] std::size_t rank() const { return basis.basis.size(); }
  // splitting type, in basis order (non-increasing)
  [[nodiscard]] std::vector<int> degrees() const {
    std::vector<int> d;
    for (int x : basis.degrees) d.push_back(-x);
    return d;
  }
};

inline ConditionSheaf condition_sheaf(const ModuleProblem& prob) {
  ConditionSheaf s;
  s.shift = prob.shift.empty() ? std::vector<int>(prob.n, 0) : prob.shift;
  s.basis = reduced_basis(prob);
  return s;
}

// Coordinates of v (a section of the ambient twisted by its own shifted
// degree) in the reduced basis; exact by the predictable-degree property.
inline PolyVector sheaf_coordinates(const ConditionSheaf& s, const PolyVector& v) {
  std::optional<int> delta;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    const int d = *v[i].degree() - s.shift[i];
    delta = delta ? std::max(*delta, d) : d;
  }
  if (!delta) return PolyVector(s.rank());
  std::vector<int> bounds;
  for (int x : s.basis.degrees) bounds.push_back(*delta - x);
  auto sol = solve_bounded(s.basis.matrix(s.ambient()), v, bounds);
  if (!sol) throw CertificationError("complex: image leaves the target condition sheaf");
  return *sol;
}

// Linear conditions on Hom(src fiber, tgt fiber), entries indexed i * n + l
// (i target row, l source column): weight-preserving, or weight-raising
// when strong.
inline RatMatrix parabolic_hom_conditions(const FiberFlag& src, const FiberFlag& tgt, bool strong) {
  const std::size_t n = src.dim, np = tgt.dim;
  std::vector<std::vector<Rat>> rows;
  for (std::size_t j = 0; j < src.steps(); ++j) {
    const Rat w = src.weights[j];
    std::optional<std::size_t> t;
    for (std::size_t s = 0; s < tgt.steps(); ++s)
      if (strong ? tgt.weights[s] > w : tgt.weights[s] >= w) t = s;
    RatMatrix ann = t ? annihilator(tgt.spaces[*t], np) : RatMatrix::identity(np);
    const RatMatrix& S = src.spaces[j];
    for (std::size_t a = 0; a < ann.rows(); ++a)
      for (std::size_t c = 0; c < S.cols(); ++c) {
        std::vector<Rat> row(np * n, Rat(0));
        bool nz = false;
        for (std::size_t i = 0; i < np; ++i)
          for (std::size_t l = 0; l < n; ++l) {
            row[i * n + l] = ann(a, i) * S(l, c);
            nz = nz || !row[i * n + l].is_zero();
          }
        if (nz) rows.push_back(std::move(row));
      }
  }
  RatMatrix m(rows.size(), np * n, Rat(0));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < np * n; ++c) m(r, c) = rows[r][c];
  return m;
}

// ---------------------------------------------------------------------------
// Direct sums of Hom(E^a, E^b) blocks between levels of a Hodge system.

struct HomBlock {
  std::size_t src = 0, tgt = 0;
  std::size_t offset = 0;
};

struct HomLayout {
  std::vector<HomBlock> blocks;
  std::vector<int> shift;
  [[nodiscard]] std::size_t size() const { return shift.size(); }
  [[nodiscard]] std::optional<std::size_t> find(std::size_t src, std::size_t tgt) const {
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (blocks[b].src == src && blocks[b].tgt == tgt) return b;
    return std::nullopt;
  }
};

namespace detail {

inline HomLayout hom_layout(const HodgeSystem& e, const std::vector<std::pair<std::size_t, std::size_t>>& pairs, int twist) {
  HomLayout l;
  for (auto [a, b] : pairs) {
    const auto& ds = e.levels[a].bundle.degrees();
    const auto& dt = e.levels[b].bundle.degrees();
    l.blocks.push_back({a, b, l.shift.size()});
    for (int y : dt)
      for (int x : ds) l.shift.push_back(y - x + twist);
  }
  return l;
}

inline PolyMatrix block_of(const HodgeSystem& e, const HomLayout& l, std::size_t b, const PolyVector& v) {
  const std::size_t n = e.levels[l.blocks[b].src].bundle.rank(), np = e.levels[l.blocks[b].tgt].bundle.rank();
  PolyMatrix m(np, n);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = v[l.blocks[b].offset + i * n + j];
  return m;
}

inline void put_block(const HodgeSystem& e, const HomLayout& l, std::size_t b, const PolyMatrix& m, PolyVector& v) {
  const std::size_t n = e.levels[l.blocks[b].src].bundle.rank();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) v[l.blocks[b].offset + i * n + j] += m(i, j);
}

// Flag conditions (weight-preserving or strong) and optionally the trace
// condition on blocks with src == tgt.
inline ModuleProblem hom_problem(const HodgeSystem& e, const HomLayout& l, bool strong, bool trace_free) {
  ModuleProblem prob;
  prob.n = l.size();
  prob.shift = l.shift;
  prob.equations = PolyMatrix(0, prob.n);
  for (std::size_t x = 0; x < e.points.size(); ++x) {
    std::vector<RatMatrix> parts;
    std::size_t total = 0;
    for (const auto& b : l.blocks) {
      parts.push_back(parabolic_hom_conditions(e.levels[b.src].par.flags[x], e.levels[b.tgt].par.flags[x], strong));
      total += parts.back().rows();
    }
    RatMatrix rows(total, prob.n, Rat(0));
    std::size_t r = 0;
    for (std::size_t b = 0; b < l.blocks.size(); ++b) {
      for (std::size_t i = 0; i < parts[b].rows(); ++i, ++r)
        for (std::size_t c = 0; c < parts[b].cols(); ++c) rows(r, l.blocks[b].offset + c) = parts[b](i, c);
    }
    if (total > 0) prob.conditions.push_back({e.points[x], rows});
  }
  if (trace_free) {
    PolyMatrix tr(1, prob.n);
    bool any = false;
    for (const auto& b : l.blocks) {
      if (b.src != b.tgt) continue;
      const std::size_t n = e.levels[b.src].bundle.rank();
      for (std::size_t i = 0; i < n; ++i) tr(0, b.offset + i * n + i) = Poly(Rat(1));
      any = true;
    }
    if (any) prob.equations = tr;
  }
  return prob;
}

inline ConditionSheaf hom_sheaf(const HodgeSystem& e, const HomLayout& l, bool strong, bool trace_free) {
  if (l.size() == 0) return ConditionSheaf{};
  return condition_sheaf(hom_problem(e, l, strong, trace_free));
}

}  // namespace detail

struct EndComplexOptions {
  bool strong = false;      // strongly parabolic in C^1
  bool trace_free = false;
};

// Gr^p(End) -> Gr^{p-1}(End) (x) O(k-2), d(phi) = theta phi - phi theta.
inline TwoTermComplex graded_end_complex(const HodgeSystem& e, long p, const EndComplexOptions& opt = {}) {
  e.validate();
  if (e.points.empty()) throw std::invalid_argument("end complex: at least one parabolic point is required");
  const long m = static_cast<long>(e.levels.size());
  if (p < -(m - 1) || p > m) throw std::invalid_argument("end complex: p outside the filtration range");
  std::vector<std::pair<std::size_t, std::size_t>> p0, p1;
  for (long a = 0; a < m; ++a) {
    if (a + p >= 0 && a + p < m) p0.emplace_back(a, a + p);
    if (a + p - 1 >= 0 && a + p - 1 < m) p1.emplace_back(a, a + p - 1);
  }
  const HomLayout l0 = detail::hom_layout(e, p0, 0), l1 = detail::hom_layout(e, p1, e.twist());
  const ConditionSheaf s0 = detail::hom_sheaf(e, l0, false, opt.trace_free && p == 0);
  const ConditionSheaf s1 = detail::hom_sheaf(e, l1, opt.strong, opt.trace_free && p == 1);
  TwoTermComplex c{s0.degrees(), s1.degrees(), PolyMatrix(s1.rank(), s0.rank())};
  for (std::size_t j = 0; j < s0.rank(); ++j) {
    const PolyVector& phi = s0.basis.basis[j];
    PolyVector out(l1.size());
    for (std::size_t b = 0; b < l1.blocks.size(); ++b) {
      const std::size_t a = l1.blocks[b].src, t = l1.blocks[b].tgt;
      PolyMatrix acc(e.levels[t].bundle.rank(), e.levels[a].bundle.rank());
      // theta_{t+1} phi_{(a, t+1)}
      if (auto b0 = l0.find(a, t + 1)) acc = acc + e.theta[t].matrix * detail::block_of(e, l0, *b0, phi);
      // phi_{(a-1, t)} theta_a
      if (a >= 1)
        if (auto b0 = l0.find(a - 1, t)) acc = acc - detail::block_of(e, l0, *b0, phi) * e.theta[a - 1].matrix;
      detail::put_block(e, l1, b, acc, out);
    }
    PolyVector y;
    try {
      y = sheaf_coordinates(s1, out);
    } catch (const CertificationError&) {
      throw std::invalid_argument("end complex: theta is not strongly parabolic");
    }
    for (std::size_t i = 0; i < s1.rank(); ++i) c.d(i, j) = y[i];
  }
  return c;
}

inline TwoTermComplex parabolic_end_complex(const FuchsianSystem& s, const GTFiltration& F, long p, const EndComplexOptions& opt = {}) {
  return graded_end_complex(kodaira_spencer(s, F).system, p, opt);
}

// ---------------------------------------------------------------------------
// The total complex ParEnd(V) -> (S)ParEnd(V) (x) O(k-2) with differential
// ad(nabla). Global sections of both sheaves are constant, so h0 counts
// constant flag-preserving endomorphisms commuting with every residue and h2
// counts the same for the Serre dual sheaf (strongly parabolic by default,
// flag-preserving for the strong variant); h1 then follows from the Euler
// characteristic of the splitting types.

struct TotalEndComplex {
  std::vector<int> c0;
  std::vector<int> c1;
  HyperDims dims;
};

namespace detail {

inline HodgeSystem single_level(const FuchsianSystem& s) {
  HodgeSystem e;
  e.points = s.points;
  e.p_min = 0;
  e.levels.push_back({SplitBundle::trivial(s.rank), s.par});
  return e;
}

// Constant endomorphisms with flag conditions commuting with all residues.
inline long flat_constants(const FuchsianSystem& s, bool strong, bool trace_free) {
  const std::size_t r = s.rank, n = r * r;
  std::vector<std::vector<Rat>> rows;
  auto add = [&](const RatMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      std::vector<Rat> row(n);
      for (std::size_t c = 0; c < n; ++c) row[c] = m(i, c);
      rows.push_back(std::move(row));
    }
  };
  for (const auto& f : s.par.flags) add(parabolic_hom_conditions(f, f, strong));
  for (const auto& a : s.residues) {
    // entry (i, l) of a phi - phi a
    RatMatrix m(n, n, Rat(0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t l = 0; l < r; ++l)
        for (std::size_t j = 0; j < r; ++j) {
          m(i * r + l, j * r + l) += a(i, j);
          m(i * r + l, i * r + j) -= a(j, l);
        }
    add(m);
  }
  if (trace_free) {
    RatMatrix tr(1, n, Rat(0));
    for (std::size_t i = 0; i < r; ++i) tr(0, i * r + i) = Rat(1);
    add(tr);
  }
  RatMatrix m(rows.size(), n, Rat(0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < n; ++c) m(i, c) = rows[i][c];
  return static_cast<long>(n - rank(m));
}

}  // namespace detail

inline TotalEndComplex total_end_complex(const FuchsianSystem& s, const EndComplexOptions& opt = {}) {
  validate_system(s);
  if (s.points.empty()) throw std::invalid_argument("end complex: at least one parabolic point is required");
  const HodgeSystem e = detail::single_level(s);
  const HomLayout l0 = detail::hom_layout(e, {{0, 0}}, 0), l1 = detail::hom_layout(e, {{0, 0}}, e.twist());
  TotalEndComplex t;
  t.c0 = detail::hom_sheaf(e, l0, false, opt.trace_free).degrees();
  t.c1 = detail::hom_sheaf(e, l1, opt.strong, opt.trace_free).degrees();
  t.dims.h0 = detail::flat_constants(s, false, opt.trace_free);
  t.dims.h2 = detail::flat_constants(s, !opt.strong, opt.trace_free);
  t.dims.h1 = t.dims.h0 + t.dims.h2 - (chi_split(t.c0) - chi_split(t.c1));
  return t;
}

struct GradedDim {
  long p = 0;
  HyperDims dims;
};

struct DefDims {
  HyperDims total;
  HyperDims trace_free;
  std::vector<GradedDim> graded;  // Gr^p of H^1, p increasing
  bool strong = false;

  [[nodiscard]] long graded_h1_sum() const {
    long s = 0;
    for (const auto& g : graded) s += g.dims.h1;
    return s;
  }
  [[nodiscard]] long graded_h1(long p) const {
    for (const auto& g : graded)
      if (g.p == p) return g.dims.h1;
    return 0;
  }
};

struct GrStabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline DefDims graded_def_dims(const FuchsianSystem& s, const GTFiltration& F, bool strong = false) {
  const GradedRealization g = kodaira_spencer(s, F);
  if (!is_stable(g.system)) throw GrStabilityError("graded_def_dims: graded system is not certified stable");
  DefDims d;
  d.strong = strong;
  d.total = total_end_complex(s, {strong, false}).dims;
  d.trace_free = total_end_complex(s, {strong, true}).dims;
  const long m = static_cast<long>(g.system.levels.size());
  for (long p = -(m - 1); p <= m; ++p) d.graded.push_back({p, hyper_dims(graded_end_complex(g.system, p, {strong, false}))});
  return d;
}

}  // namespace hodgelim
