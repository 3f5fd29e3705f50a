#pragma once

// Fuchsian systems d/dt - sum A_i/(t - x_i) on the trivial bundle O^r,
// Griffiths-transverse filtrations, the Kodaira-Spencer construction and the
// modification loop that ends at a gr-semistable filtration.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hodgelim/bundle.hpp"
#include "hodgelim/hodge.hpp"
#include "hodgelim/parabolic.hpp"

namespace hodgelim {

struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FuchsianSystem {
  std::size_t rank = 0;
  std::vector<Rat> points;
  std::vector<RatMatrix> residues;
  ParabolicData par;

  [[nodiscard]] std::size_t size() const { return points.size(); }
};

struct Eigen {
  Rat value;
  std::size_t multiplicity = 0;
  RatMatrix space;  // column basis of the eigenspace
};

namespace detail {

inline std::vector<mpz_class> divisors(mpz_class n) {
  if (n < 0) n = -n;
  std::vector<mpz_class> small, large;
  for (mpz_class d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace detail

// Distinct rational roots, increasing.
inline std::vector<Rat> rational_roots(Poly p) {
  if (p.is_zero()) throw std::invalid_argument("rational_roots: zero polynomial");
  std::vector<Rat> roots;
  if (p.coeff(0).is_zero()) {
    roots.push_back(Rat(0));
    while (p.coeff(0).is_zero()) p = exact_div(p, Poly::t());
  }
  if (*p.degree() > 0) {
    mpz_class l = 1;
    for (const auto& c : p.coeffs()) l = lcm(l, c.den());
    const mpz_class a0 = (p.coeff(0) * Rat(mpq_class(l))).num();
    const mpz_class an = (p.lead() * Rat(mpq_class(l))).num();
    for (const auto& num : detail::divisors(a0))
      for (const auto& den : detail::divisors(an))
        for (int s : {1, -1}) {
          Rat x(mpq_class(mpz_class(s * num), den));
          if (p.eval(x).is_zero() && std::find(roots.begin(), roots.end(), x) == roots.end()) roots.push_back(x);
        }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline Poly char_poly(const RatMatrix& a) {
  const std::size_t n = a.rows();
  PolyMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Poly(-a(i, j));
  for (std::size_t i = 0; i < n; ++i) m(i, i) += Poly::t();
  return poly_det(m);
}

// Eigenvalues in decreasing order; throws unless the matrix is semisimple
// with rational spectrum.
inline std::vector<Eigen> eigen_decomposition(const RatMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("residue must be square");
  const Poly cp = char_poly(a);
  std::vector<Eigen> out;
  std::size_t total = 0;
  auto roots = rational_roots(cp);
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) {
    Eigen e{*it, static_cast<std::size_t>(root_multiplicity(cp, *it)), {}};
    RatMatrix shifted = a;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= *it;
    e.space = nullspace(shifted);
    if (e.space.cols() != e.multiplicity)
      throw std::invalid_argument("residue is not semisimple (eigenvalue " + it->str() + ")");
    total += e.multiplicity;
    out.push_back(std::move(e));
  }
  if (total != n) throw std::invalid_argument("residue has non-rational eigenvalues");
  return out;
}

struct SystemReport {
  std::vector<std::vector<Eigen>> eigen;  // per point
  [[nodiscard]] std::vector<std::vector<Rat>> eigenvalues() const {
    std::vector<std::vector<Rat>> out;
    for (const auto& pt : eigen) {
      std::vector<Rat> v;
      for (const auto& e : pt)
        for (std::size_t m = 0; m < e.multiplicity; ++m) v.push_back(e.value);
      out.push_back(v);
    }
    return out;
  }
};

inline SystemReport validate_system(const FuchsianSystem& s) {
  const std::size_t r = s.rank;
  if (r == 0) throw std::invalid_argument("rank must be positive");
  if (s.points.size() < 2) throw std::invalid_argument("at least two points required");
  if (s.residues.size() != s.points.size()) throw std::invalid_argument("one residue per point required");
  s.par.validate(r);
  if (s.par.points != s.points) throw std::invalid_argument("parabolic points differ from residue points");
  RatMatrix sum(r, r, Rat(0));
  SystemReport rep;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const RatMatrix& a = s.residues[i];
    if (a.rows() != r || a.cols() != r) throw std::invalid_argument("residue has wrong shape");
    sum = sum + a;
    rep.eigen.push_back(eigen_decomposition(a));
    for (const auto& sp : s.par.flags[i].spaces)
      if (sp.cols() > 0 && rank(sp.hcat(a * sp)) != sp.cols())
        throw std::invalid_argument("flag step at point " + s.points[i].str() + " is not invariant under the residue");
  }
  if (!sum.is_zero()) throw std::invalid_argument("residues do not sum to zero");
  return rep;
}

// Flags from residue eigenvalues: weight lambda - lambda_min, eigenspaces
// of larger eigenvalue first, equal eigenvalues in one step. Requires the
// eigenvalue spread at each point to be < 1.
inline ParabolicData eigen_parabolic(const std::vector<Rat>& points, const std::vector<RatMatrix>& residues) {
  ParabolicData pd;
  pd.points = points;
  for (const auto& a : residues) {
    auto eig = eigen_decomposition(a);
    const Rat lo = eig.back().value;
    if (eig.front().value - lo >= Rat(1)) throw std::invalid_argument("eigenvalue spread must be < 1 for eigen weights");
    std::vector<std::pair<Rat, RatMatrix>> steps;
    for (const auto& e : eig) steps.push_back({e.value - lo, e.space});
    pd.flags.push_back(FiberFlag::from_steps(a.rows(), steps));
  }
  return pd;
}

inline Poly point_product(const std::vector<Rat>& pts, std::optional<std::size_t> skip = std::nullopt) {
  Poly p(1);
  for (std::size_t j = 0; j < pts.size(); ++j)
    if (!skip || j != *skip) p *= Poly::linear(pts[j]);
  return p;
}

// P f' + sum_i A_i prod_{j != i}(t - x_j) f, the connection in the
// trivialization dt/P(t) of the log cotangent bundle O(k-2).
inline PolyVector apply_nabla(const FuchsianSystem& s, const PolyVector& f) {
  if (f.size() != s.rank) throw std::invalid_argument("apply_nabla: size mismatch");
  const Poly big = point_product(s.points);
  PolyVector out(s.rank);
  for (std::size_t i = 0; i < s.rank; ++i) out[i] = big * f[i].derivative();
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Poly pk = point_product(s.points, k);
    for (std::size_t i = 0; i < s.rank; ++i) {
      Poly acc;
      for (std::size_t j = 0; j < s.rank; ++j)
        if (!s.residues[k](i, j).is_zero() && !f[j].is_zero()) acc += s.residues[k](i, j) * f[j];
      out[i] += pk * acc;
    }
  }
  return out;
}

inline PolyMatrix apply_nabla(const FuchsianSystem& s, const PolyMatrix& cols) {
  std::vector<PolyVector> out;
  for (std::size_t j = 0; j < cols.cols(); ++j) out.push_back(apply_nabla(s, cols.col(j)));
  return columns_to_matrix(out, s.rank);
}

// F^0 = V ⊋ F^1 ⊇ ... ⊇ F^{m-1} ⊋ 0 stored as f[p] = F^p for 0 <= p < m;
// F^p = V for p < 0 and F^p = 0 for p >= m. Equal consecutive steps (empty
// graded pieces) are allowed so that reducible inputs can be followed.
struct GTFiltration {
  std::vector<Subbundle> f;

  static GTFiltration trivial(std::size_t r) { return {{Subbundle::whole(SplitBundle::trivial(r))}}; }
  [[nodiscard]] std::size_t length() const { return f.size(); }
  [[nodiscard]] std::size_t ambient_rank() const { return f.front().ambient().rank(); }
  [[nodiscard]] Subbundle at(int p) const {
    if (p <= 0) return f.front();
    if (p >= static_cast<int>(f.size())) return Subbundle::zero(f.front().ambient());
    return f[static_cast<std::size_t>(p)];
  }
  [[nodiscard]] std::vector<std::size_t> ranks() const {
    std::vector<std::size_t> v;
    for (const auto& s : f) v.push_back(s.rank());
    return v;
  }
};

inline void validate_filtration(const GTFiltration& F, std::size_t r) {
  if (F.f.empty()) throw std::invalid_argument("filtration: empty chain");
  const SplitBundle v = SplitBundle::trivial(r);
  if (!(F.f.front().ambient() == v) || F.f.front().rank() != r) throw std::invalid_argument("filtration: F^0 must be V");
  for (std::size_t p = 0; p < F.f.size(); ++p) {
    const auto& s = F.f[p];
    if (!(s.ambient() == v)) throw std::invalid_argument("filtration: ambient mismatch");
    if (s.rank() == 0) throw std::invalid_argument("filtration: zero step inside the chain");
    if (!check_subbundle(s.inclusion).valid()) throw std::invalid_argument("filtration: step is not a subbundle");
    if (p > 0) {
      const auto& prev = F.f[p - 1];
      if (s.rank() > prev.rank() || poly_rank(prev.matrix().hcat(s.matrix())) != prev.rank())
        throw std::invalid_argument("filtration: chain is not decreasing");
    }
  }
}

// nabla F^p inside F^{p-1} (x) O(k-2) for every p, by the exact identity
// pi_{p-1} nabla(F^p) = 0.
inline bool check_transversality(const FuchsianSystem& s, const GTFiltration& F) {
  validate_filtration(F, s.rank);
  for (std::size_t p = 2; p < F.f.size(); ++p) {
    Quotient q = quotient(F.f[p - 1]);
    if (!(q.projection.matrix * apply_nabla(s, F.f[p].matrix())).is_zero()) return false;
  }
  return true;
}

// Concrete realization of Gr_F: E^p sits inside Q_{p+1} = V/F^{p+1}.
struct GradedRealization {
  std::vector<Quotient> q;      // q[p] = V/F^p for p = 0..m (q[0] is zero)
  std::vector<Subbundle> in_q;  // in_q[p] = E^p as a subbundle of q[p+1]
  HodgeSystem system;
};

namespace detail {

inline PolyVector random_section(const Subbundle& sub, int salt) {
  PolyVector c(sub.rank());
  for (std::size_t j = 0; j < sub.rank(); ++j)
    c[j] = Poly({Rat(static_cast<long>(salt + 2 * j + 1)), Rat(static_cast<long>(1 - static_cast<int>(j)))});
  return hodgelim::apply(sub.matrix(), c);
}

}  // namespace detail

inline GradedRealization kodaira_spencer(const FuchsianSystem& s, const GTFiltration& F) {
  if (!check_transversality(s, F)) throw std::invalid_argument("kodaira_spencer: filtration is not Griffiths-transverse");
  const std::size_t m = F.length();
  const int tw = static_cast<int>(s.size()) - 2;
  GradedRealization g;
  for (std::size_t p = 0; p <= m; ++p) g.q.push_back(quotient(F.at(static_cast<int>(p))));
  g.system.points = s.points;
  for (std::size_t p = 0; p < m; ++p) {
    const Quotient& qn = g.q[p + 1];
    Subbundle e = saturate_span(qn.bundle, qn.projection.matrix * F.f[p].matrix());
    g.in_q.push_back(e);
    g.system.levels.push_back({e.bundle(), s.par.push_forward(qn.projection).restrict_to(e)});
  }
  for (std::size_t p = 1; p < m; ++p) {
    const Subbundle& e = g.in_q[p];
    const Subbundle& below = g.in_q[p - 1];
    const Quotient& qn = g.q[p + 1];
    const Quotient& qc = g.q[p];
    BundleMap th = BundleMap::zero(e.bundle(), below.bundle(), tw);
    const PolyMatrix lift_map = qn.projection.matrix * F.f[p].matrix();
    for (std::size_t j = 0; j < e.rank(); ++j) {
      const PolyVector target = e.matrix().col(j);
      const PolyVector g0 = lift_through(lift_map, target);
      PolyVector f = hodgelim::apply(F.f[p].matrix(), g0);
      auto column = [&](const PolyVector& sec) {
        auto c = coordinates_in(below, hodgelim::apply(qc.projection.matrix, apply_nabla(s, sec)));
        if (!c) throw CertificationError("kodaira_spencer: projection of nabla leaves E^{p-1}");
        return *c;
      };
      PolyVector col = column(f);
      if (p + 1 < m) {
        PolyVector f2 = f;
        PolyVector extra = detail::random_section(F.f[p + 1], static_cast<int>(p + j));
        for (std::size_t i = 0; i < f2.size(); ++i) f2[i] += extra[i];
        if (column(f2) != col) throw CertificationError("kodaira_spencer: theta depends on the lift");
      }
      for (std::size_t i = 0; i < col.size(); ++i) th.matrix(i, j) = col[i];
    }
    if (!th.respects_bounds()) throw CertificationError("kodaira_spencer: theta violates degree bounds");
    g.system.theta.push_back(th);
  }
  g.system.validate();
  return g;
}

struct LevelInfo {
  int p = 0;
  std::size_t rank = 0;
  int degree = 0;
  Rat par_degree;
  friend bool operator==(const LevelInfo&, const LevelInfo&) = default;
};

inline std::vector<LevelInfo> level_infos(const HodgeSystem& e) {
  std::vector<LevelInfo> out;
  for (std::size_t i = 0; i < e.levels.size(); ++i) {
    const auto& l = e.levels[i];
    out.push_back({e.p_of(i), l.bundle.rank(), l.bundle.degree(), Rat(static_cast<long>(l.bundle.degree())) + l.par.total_weight()});
  }
  return out;
}

inline std::vector<LevelInfo> level_infos(const HodgeSystem& e, const GradedSub& h) {
  std::vector<LevelInfo> out;
  for (std::size_t i = 0; i < h.subs.size(); ++i)
    out.push_back({e.p_of(i), h.subs[i].rank(), h.subs[i].degree(), par_degree(h.subs[i], e.levels[i].par)});
  return out;
}

// G^p = ker(V -> (V/F^p)/H^{p-1}), then leading copies of V and trailing
// zeros are trimmed. Checks the graded bookkeeping
// Gr_G^p = Gr_F^p/H^p + H^{p-1} in rank, degree and parabolic degree.
inline GTFiltration modify(const FuchsianSystem& s, const GTFiltration& F, const GradedRealization& g, const GradedSub& h) {
  const HodgeSystem& e = g.system;
  validate_graded_sub(e, h);
  const std::size_t m = F.length();
  const std::size_t r = s.rank;
  std::vector<Subbundle> G;
  for (std::size_t p = 0; p <= m; ++p) {
    if (p == 0 || h.subs[p - 1].rank() == 0) {
      G.push_back(F.at(static_cast<int>(p)));
      continue;
    }
    const Quotient& q = g.q[p];
    Subbundle img{BundleMap{h.subs[p - 1].bundle(), q.bundle, 0, g.in_q[p - 1].matrix() * h.subs[p - 1].matrix()}};
    Quotient rho = quotient(img);
    G.push_back(kernel_subbundle(compose(rho.projection, q.projection)));
  }

  auto gpar = [&](std::size_t p) { return p < G.size() ? par_degree(G[p], s.par) : Rat(0); };
  auto grank = [&](std::size_t p) { return p < G.size() ? G[p].rank() : std::size_t{0}; };
  auto gdeg = [&](std::size_t p) { return p < G.size() ? G[p].degree() : 0; };
  for (std::size_t p = 0; p <= m; ++p) {
    std::size_t rk = 0;
    int dg = 0;
    Rat pd(0);
    if (p < m) {
      const auto& lv = e.levels[p];
      rk += lv.bundle.rank() - h.subs[p].rank();
      dg += lv.bundle.degree() - h.subs[p].degree();
      pd += Rat(static_cast<long>(lv.bundle.degree())) + lv.par.total_weight() - par_degree(h.subs[p], lv.par);
    }
    if (p > 0) {
      rk += h.subs[p - 1].rank();
      dg += h.subs[p - 1].degree();
      pd += par_degree(h.subs[p - 1], e.levels[p - 1].par);
    }
    if (grank(p) - grank(p + 1) != rk || gdeg(p) - gdeg(p + 1) != dg || gpar(p) - gpar(p + 1) != pd)
      throw CertificationError("modify: graded bookkeeping fails at level " + std::to_string(p));
  }

  while (G.size() > 1 && G[1].rank() == r) G.erase(G.begin());
  while (G.size() > 1 && G.back().rank() == 0) G.pop_back();
  GTFiltration out{G};
  if (!check_transversality(s, out)) throw CertificationError("modify: new filtration is not Griffiths-transverse");
  return out;
}

inline bool lex_less(const HNInvariants& a, const HNInvariants& b) {
  if (a.beta != b.beta) return a.beta < b.beta;
  if (a.rho != b.rho) return a.rho < b.rho;
  return a.gamma < b.gamma;
}

struct TraceStep {
  int step = 0;
  std::vector<LevelInfo> levels;
  std::optional<HNInvariants> invariants;  // empty at the final step
  std::vector<LevelInfo> destabilizer;
  bool heuristic = false;
  bool contiguous = true;
};

struct IterationConfig {
  SearchConfig search;
  int budget = 64;
};

struct PartialOper {
  GTFiltration filtration;
  HodgeSystem limit;
  std::vector<TraceStep> trace;
  bool heuristic = false;
};

inline bool contiguous_levels(const HodgeSystem& e) {
  bool seen = false, gap = false;
  for (const auto& l : e.levels) {
    if (l.bundle.rank() > 0) {
      if (gap) return false;
      seen = true;
    } else if (seen) {
      gap = true;
    }
  }
  return true;
}

inline PartialOper iterate_to_partial_oper(const FuchsianSystem& s, const IterationConfig& cfg = {}) {
  validate_system(s);
  PartialOper out;
  GTFiltration F = GTFiltration::trivial(s.rank);
  std::optional<HNInvariants> prev;
  for (int step = 0;; ++step) {
    GradedRealization g = kodaira_spencer(s, F);
    auto d = max_destabilizer(g.system, cfg.search);
    TraceStep ts;
    ts.step = step;
    ts.levels = level_infos(g.system);
    ts.contiguous = contiguous_levels(g.system);
    if (d) {
      ts.invariants = d->invariants;
      ts.destabilizer = level_infos(g.system, d->sub);
      ts.heuristic = d->heuristic;
      out.heuristic = out.heuristic || d->heuristic;
    }
    out.trace.push_back(ts);
    if (!d) {
      out.filtration = F;
      out.limit = g.system;
      return out;
    }
    if (prev && !lex_less(d->invariants, *prev))
      throw CertificationError("iteration: (beta, rho, gamma) did not decrease at step " + std::to_string(step));
    prev = d->invariants;
    if (step >= cfg.budget) throw BudgetExceeded("iteration: step budget of " + std::to_string(cfg.budget) + " exceeded");
    F = modify(s, F, g, d->sub);
  }
}

}  // namespace hodgelim
