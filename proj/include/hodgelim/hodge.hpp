#pragma once

// Systems of Hodge bundles E = (+)_p E^p on P^1 with logarithmic
// theta: E^p -> E^{p-1} (x) O(k-2), parabolic flags per level, and the
// search for the maximal destabilizing graded subobject.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hodgelim/bundle.hpp"
#include "hodgelim/parabolic.hpp"

namespace hodgelim {

struct HodgeLevel {
  SplitBundle bundle;
  ParabolicData par;  // flags on the fibers of this level
};

struct HodgeSystem {
  std::vector<Rat> points;
  int p_min = 0;                   // Hodge index of levels[0]
  std::vector<HodgeLevel> levels;  // increasing p
  std::vector<BundleMap> theta;    // theta[i]: levels[i+1] -> levels[i], twist k-2

  [[nodiscard]] int twist() const { return static_cast<int>(points.size()) - 2; }
  [[nodiscard]] int p_of(std::size_t i) const { return p_min + static_cast<int>(i); }
  [[nodiscard]] std::size_t rank() const {
    std::size_t r = 0;
    for (const auto& l : levels) r += l.bundle.rank();
    return r;
  }
  [[nodiscard]] int degree() const {
    int d = 0;
    for (const auto& l : levels) d += l.bundle.degree();
    return d;
  }
  [[nodiscard]] Rat par_degree() const {
    Rat d(0);
    for (const auto& l : levels) d += Rat(static_cast<long>(l.bundle.degree())) + l.par.total_weight();
    return d;
  }
  [[nodiscard]] std::vector<std::size_t> rank_vector() const {
    std::vector<std::size_t> v;
    for (const auto& l : levels) v.push_back(l.bundle.rank());
    return v;
  }

  void validate() const {
    if (!levels.empty() && theta.size() + 1 != levels.size())
      throw std::invalid_argument("HodgeSystem: one theta per adjacent pair of levels");
    for (const auto& l : levels) {
      if (l.par.points != points) throw std::invalid_argument("HodgeSystem: level flags use different points");
      l.par.validate(l.bundle.rank());
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const auto& th = theta[i];
      if (!(th.source == levels[i + 1].bundle) || !(th.target == levels[i].bundle) || th.twist != twist())
        throw std::invalid_argument("HodgeSystem: theta does not match levels");
      th.validate();
    }
  }
};

inline Rat zeta(const HodgeSystem& e) {
  const std::size_t r = e.rank();
  if (r == 0) throw std::invalid_argument("zeta: zero rank");
  Rat s(0);
  for (std::size_t i = 0; i < e.levels.size(); ++i)
    s += Rat(static_cast<long>(e.levels[i].bundle.rank())) * Rat(e.p_of(i));
  return s / Rat(static_cast<long>(r));
}

inline HodgeSystem shift(HodgeSystem e, int k) {
  e.p_min += k;
  return e;
}

inline Rat par_slope(const HodgeSystem& e) {
  if (e.rank() == 0) throw std::invalid_argument("par_slope: zero rank");
  return e.par_degree() / Rat(static_cast<long>(e.rank()));
}

// Graded subobject: one saturated subbundle per level.
struct GradedSub {
  std::vector<Subbundle> subs;

  [[nodiscard]] std::size_t rank() const {
    std::size_t r = 0;
    for (const auto& s : subs) r += s.rank();
    return r;
  }
  [[nodiscard]] std::vector<std::size_t> rank_vector() const {
    std::vector<std::size_t> v;
    for (const auto& s : subs) v.push_back(s.rank());
    return v;
  }
  [[nodiscard]] Rat par_degree(const HodgeSystem& e) const {
    Rat d(0);
    for (std::size_t i = 0; i < subs.size(); ++i) d += hodgelim::par_degree(subs[i], e.levels[i].par);
    return d;
  }
};

inline Rat par_slope(const GradedSub& h, const HodgeSystem& e) {
  if (h.rank() == 0) throw std::invalid_argument("par_slope: zero rank");
  return h.par_degree(e) / Rat(static_cast<long>(h.rank()));
}

// theta(H^{p}) lands in H^{p-1} (checked generically; H^{p-1} is saturated).
inline bool is_theta_invariant(const HodgeSystem& e, const GradedSub& h) {
  for (std::size_t i = 0; i + 1 < h.subs.size(); ++i) {
    const Subbundle& up = h.subs[i + 1];
    const Subbundle& down = h.subs[i];
    if (up.rank() == 0) continue;
    PolyMatrix img = e.theta[i].matrix * up.matrix();
    if (down.rank() == 0) {
      if (!img.is_zero()) return false;
      continue;
    }
    if (poly_rank(down.matrix().hcat(img)) != down.rank()) return false;
  }
  return true;
}

inline void validate_graded_sub(const HodgeSystem& e, const GradedSub& h) {
  if (h.subs.size() != e.levels.size()) throw std::invalid_argument("GradedSub: level count mismatch");
  for (std::size_t i = 0; i < h.subs.size(); ++i) {
    if (!(h.subs[i].ambient() == e.levels[i].bundle)) throw std::invalid_argument("GradedSub: ambient mismatch");
    auto rep = check_subbundle(h.subs[i].inclusion);
    if (!rep.valid()) throw std::invalid_argument("GradedSub: " + rep.describe());
  }
  if (!is_theta_invariant(e, h)) throw std::invalid_argument("GradedSub: not theta-invariant");
}

// zeta of the subobject and of the quotient, as centers of gravity of ranks.
inline Rat zeta_of_ranks(const std::vector<std::size_t>& ranks, int p_min) {
  std::size_t r = 0;
  Rat s(0);
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    r += ranks[i];
    s += Rat(static_cast<long>(ranks[i])) * Rat(p_min + static_cast<int>(i));
  }
  if (r == 0) throw std::invalid_argument("zeta: zero rank");
  return s / Rat(static_cast<long>(r));
}

struct HNInvariants {
  Rat beta;
  std::size_t rho = 0;
  Rat gamma;
  friend bool operator==(const HNInvariants&, const HNInvariants&) = default;
};

inline HNInvariants hn_step_invariants(const HodgeSystem& e, const GradedSub& h) {
  validate_graded_sub(e, h);
  const auto hr = h.rank_vector();
  const auto er = e.rank_vector();
  std::vector<std::size_t> qr(er.size());
  for (std::size_t i = 0; i < er.size(); ++i) qr[i] = er[i] - hr[i];
  if (h.rank() == 0 || h.rank() == e.rank()) throw std::invalid_argument("hn_step_invariants: H must be proper and nonzero");
  return {par_slope(h, e), h.rank(), zeta_of_ranks(qr, e.p_min) - zeta_of_ranks(hr, e.p_min)};
}

// ---------------------------------------------------------------------------
// Destabilizer search.
//
// Candidates are graded subobjects of two shapes. Lines: a rank-1 subsheaf
// v in E^p with theta v = 0, ranked by (degree d, incidence profile) where
// the profile names for each point the flag step containing v(x); a
// nonzero v with deg v_i <= c_i - d and the incidence conditions exists
// iff some line has parabolic degree >= d + sum of step weights, so the
// best feasible pair gives the maximal line exactly. Colines: a rank-1
// quotient N: E^q -> O(m) with N theta = 0; the kernel at level q plus all
// other levels is theta-invariant, and minimizing m + sum of quotient
// weights gives the maximal corank-1 subobject. For total rank <= 3 every
// proper subobject is a line or has corank 1.

struct SearchConfig {
  std::optional<std::uint64_t> order_seed;  // permutes equal-value candidates
  bool allow_heuristic = false;             // permit total rank >= 4
  unsigned threads = 1;
};

struct SubCandidate {
  GradedSub sub;
  Rat par_degree;
  Rat slope;
  std::string family;
};

struct FamilyBest {
  std::string family;
  std::optional<Rat> slope;
};

struct SearchResult {
  Rat mu;
  std::optional<SubCandidate> best;  // maximal slope among proper subobjects
  std::vector<FamilyBest> families;
  bool heuristic = false;
};

namespace detail {

inline bool better(const SubCandidate& a, const SubCandidate& b) {
  if (a.slope != b.slope) return a.slope > b.slope;
  if (a.sub.rank() != b.sub.rank()) return a.sub.rank() > b.sub.rank();
  return a.sub.rank_vector() < b.sub.rank_vector();
}

struct Profile {
  std::vector<std::size_t> steps;
  Rat weight;
};

// One flag step per point. For lines step j means v(x) in spaces[j]; for
// colines it means N(x) kills spaces[j-1]. Either way the weight is w_j.
inline std::vector<Profile> profiles(const ParabolicData& pd) {
  std::vector<Profile> out{Profile{{}, Rat(0)}};
  for (const auto& f : pd.flags) {
    std::vector<Profile> next;
    for (const auto& pr : out)
      for (std::size_t j = 0; j < f.steps(); ++j) {
        Profile q = pr;
        q.steps.push_back(j);
        q.weight += f.weights[j];
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

struct Trial {
  int degree;
  const Profile* profile;
  Rat value;
};

inline void order_trials(std::vector<Trial>& trials, bool descending, std::mt19937_64* rng) {
  std::stable_sort(trials.begin(), trials.end(), [&](const Trial& a, const Trial& b) {
    return descending ? a.value > b.value : a.value < b.value;
  });
  if (!rng) return;
  for (std::size_t s = 0; s < trials.size();) {
    std::size_t e = s;
    while (e < trials.size() && trials[e].value == trials[s].value) ++e;
    std::shuffle(trials.begin() + static_cast<std::ptrdiff_t>(s), trials.begin() + static_cast<std::ptrdiff_t>(e), *rng);
    s = e;
  }
}

inline std::vector<Rat> pick_vector(const RatMatrix& space, std::mt19937_64* rng) {
  std::vector<Rat> v(space.rows(), Rat(0));
  if (!rng) return space.col(0);
  std::uniform_int_distribution<int> coef(1, 4), sign(0, 1);
  for (std::size_t c = 0; c < space.cols(); ++c) {
    Rat a(static_cast<long>(coef(*rng) * (sign(*rng) ? 1 : -1)));
    for (std::size_t i = 0; i < space.rows(); ++i) v[i] += a * space(i, c);
  }
  return v;
}

inline GradedSub zero_sub(const HodgeSystem& e) {
  GradedSub h;
  for (const auto& l : e.levels) h.subs.push_back(Subbundle::zero(l.bundle));
  return h;
}

inline std::optional<SubCandidate> best_line(const HodgeSystem& e, std::size_t i, std::mt19937_64* rng) {
  const SplitBundle& b = e.levels[i].bundle;
  if (b.rank() == 0) return std::nullopt;
  int d_top = b[0];
  if (i > 0) {
    Subbundle k = kernel_subbundle(e.theta[i - 1]);
    if (k.rank() == 0) return std::nullopt;
    d_top = k.bundle()[0];
  }
  const auto& pd = e.levels[i].par;
  const auto profs = profiles(pd);
  std::vector<Trial> trials;
  const int k = static_cast<int>(e.points.size());
  for (int d = d_top; d >= d_top - k; --d)
    for (const auto& pr : profs) trials.push_back({d, &pr, Rat(d) + pr.weight});
  order_trials(trials, true, rng);
  for (const auto& tr : trials) {
    detail::CoeffLayout lay(b.degrees(), -tr.degree);
    std::vector<std::vector<Rat>> rows;
    if (i > 0) detail::append_equation_rows(e.theta[i - 1].matrix, lay, rows);
    for (std::size_t x = 0; x < e.points.size(); ++x) {
      const auto& f = pd.flags[x];
      RatMatrix ann = annihilator(f.spaces[tr.profile->steps[x]], f.dim);
      if (ann.rows() > 0) detail::append_point_rows(PointCondition{e.points[x], ann}, lay, rows);
    }
    RatMatrix space = nullspace(detail::rows_to_matrix(rows, lay.total));
    if (space.cols() == 0) continue;
    PolyVector v = lay.unflatten(RatMatrix::column(pick_vector(space, rng)), 0);
    GradedSub h = zero_sub(e);
    h.subs[i] = saturate_span(b, columns_to_matrix({v}, b.rank()));
    SubCandidate c{h, h.par_degree(e), Rat(0), "lines"};
    c.slope = c.par_degree;
    if (c.par_degree != tr.value) throw std::logic_error("destabilizer search: line value mismatch");
    return c;
  }
  throw std::logic_error("destabilizer search: no line found above the kernel degree");
}

inline std::optional<SubCandidate> best_coline(const HodgeSystem& e, std::size_t q, std::mt19937_64* rng) {
  const SplitBundle& b = e.levels[q].bundle;
  if (b.rank() == 0) return std::nullopt;
  const bool has_theta = q + 1 < e.levels.size();
  int m_bot = b.degrees().back();
  if (has_theta) {
    Subbundle img = saturate_span(b, e.theta[q].matrix);
    if (img.rank() == b.rank()) return std::nullopt;
    m_bot = quotient(img).bundle.degrees().back();
  }
  const auto& pd = e.levels[q].par;
  const auto profs = profiles(pd);
  std::vector<Trial> trials;
  const int k = static_cast<int>(e.points.size());
  for (int m = m_bot; m <= m_bot + k; ++m)
    for (const auto& pr : profs) trials.push_back({m, &pr, Rat(m) + pr.weight});
  order_trials(trials, false, rng);
  std::vector<int> neg;
  for (int c : b.degrees()) neg.push_back(-c);
  const PolyMatrix theta_t = has_theta ? e.theta[q].matrix.transpose() : PolyMatrix();
  const Rat total = e.par_degree();
  for (const auto& tr : trials) {
    detail::CoeffLayout lay(neg, tr.degree);
    std::vector<std::vector<Rat>> rows;
    if (has_theta) detail::append_equation_rows(theta_t, lay, rows);
    for (std::size_t x = 0; x < e.points.size(); ++x) {
      const std::size_t j = tr.profile->steps[x];
      if (j == 0) continue;
      detail::append_point_rows(PointCondition{e.points[x], pd.flags[x].spaces[j - 1].transpose()}, lay, rows);
    }
    RatMatrix space = nullspace(detail::rows_to_matrix(rows, lay.total));
    if (space.cols() == 0) continue;
    PolyVector n = lay.unflatten(RatMatrix::column(pick_vector(space, rng)), 0);
    PolyMatrix row(1, b.rank());
    for (std::size_t c = 0; c < b.rank(); ++c) row(0, c) = n[c];
    GradedSub h;
    for (const auto& l : e.levels) h.subs.push_back(Subbundle::whole(l.bundle));
    h.subs[q] = kernel_subbundle(BundleMap{b, SplitBundle({tr.degree}), 0, row});
    if (h.rank() == 0) return std::nullopt;
    SubCandidate c{h, h.par_degree(e), Rat(0), "colines"};
    c.slope = c.par_degree / Rat(static_cast<long>(h.rank()));
    if (total - c.par_degree != tr.value) throw std::logic_error("destabilizer search: coline value mismatch");
    return c;
  }
  throw std::logic_error("destabilizer search: no quotient line found");
}

inline std::optional<SubCandidate> tail(const HodgeSystem& e, std::size_t top) {
  GradedSub h = zero_sub(e);
  for (std::size_t i = 0; i <= top; ++i) h.subs[i] = Subbundle::whole(e.levels[i].bundle);
  if (h.rank() == 0 || h.rank() == e.rank()) return std::nullopt;
  Rat pd = h.par_degree(e);
  return SubCandidate{h, pd, pd / Rat(static_cast<long>(h.rank())), "tails"};
}

// Runs tasks on `threads` workers; results are stored by task index so the
// outcome does not depend on scheduling.
inline std::vector<std::optional<SubCandidate>> run_tasks(
    const std::vector<std::function<std::optional<SubCandidate>()>>& tasks, unsigned threads) {
  std::vector<std::optional<SubCandidate>> out(tasks.size());
  if (threads <= 1 || tasks.size() <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) out[t] = tasks[t]();
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errs(tasks.size());
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
      try {
        out[t] = tasks[t]();
      } catch (...) {
        errs[t] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(threads, tasks.size()); ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& ex : errs)
    if (ex) std::rethrow_exception(ex);
  return out;
}

}  // namespace detail

// Maximal-slope proper graded subobject (maximal rank among those, then
// smallest rank vector).
inline SearchResult search_subobjects(const HodgeSystem& e, const SearchConfig& cfg = {}) {
  e.validate();
  const std::size_t r = e.rank();
  if (r == 0) throw std::invalid_argument("destabilizer search: zero rank");
  SearchResult res;
  res.mu = par_slope(e);
  res.heuristic = r >= 4;
  if (res.heuristic && !cfg.allow_heuristic)
    throw std::invalid_argument("destabilizer search: total rank " + std::to_string(r) +
                                " needs the heuristic override");
  if (r == 1) return res;

  std::vector<std::function<std::optional<SubCandidate>()>> tasks;
  std::vector<std::string> fam;
  auto seeded = [&](std::size_t t) -> std::optional<std::mt19937_64> {
    if (!cfg.order_seed) return std::nullopt;
    return std::mt19937_64(*cfg.order_seed * 0x9E3779B97F4A7C15ULL + t);
  };
  for (std::size_t i = 0; i < e.levels.size(); ++i) {
    const std::size_t t = tasks.size();
    tasks.emplace_back([&e, i, rng = seeded(t)]() mutable { return detail::best_line(e, i, rng ? &*rng : nullptr); });
    fam.emplace_back("lines");
  }
  if (r >= 3)
    for (std::size_t q = 0; q < e.levels.size(); ++q) {
      const std::size_t t = tasks.size();
      tasks.emplace_back([&e, q, rng = seeded(t)]() mutable { return detail::best_coline(e, q, rng ? &*rng : nullptr); });
      fam.emplace_back("colines");
    }
  if (res.heuristic)
    for (std::size_t i = 0; i + 1 < e.levels.size(); ++i) {
      tasks.emplace_back([&e, i] { return detail::tail(e, i); });
      fam.emplace_back("tails");
    }

  auto found = detail::run_tasks(tasks, cfg.threads);
  for (const char* name : {"lines", "colines", "tails"}) {
    if (std::find(fam.begin(), fam.end(), name) == fam.end()) continue;
    FamilyBest fb{name, std::nullopt};
    for (std::size_t t = 0; t < found.size(); ++t)
      if (fam[t] == name && found[t] && (!fb.slope || found[t]->slope > *fb.slope)) fb.slope = found[t]->slope;
    res.families.push_back(fb);
  }
  for (auto& c : found)
    if (c && (!res.best || detail::better(*c, *res.best))) res.best = std::move(c);
  if (res.best) validate_graded_sub(e, res.best->sub);
  return res;
}

struct Destabilizer {
  GradedSub sub;
  HNInvariants invariants;
  bool heuristic = false;
};

inline std::optional<Destabilizer> max_destabilizer(const HodgeSystem& e, const SearchConfig& cfg = {}) {
  SearchResult res = search_subobjects(e, cfg);
  if (!res.best || res.best->slope <= res.mu) return std::nullopt;
  return Destabilizer{res.best->sub, hn_step_invariants(e, res.best->sub), res.heuristic};
}

struct SemistabilityReport {
  bool semistable = true;
  bool heuristic = false;
  Rat mu;
  std::vector<FamilyBest> families;
};

inline SemistabilityReport is_semistable(const HodgeSystem& e, const SearchConfig& cfg = {}) {
  SearchResult res = search_subobjects(e, cfg);
  return {!res.best || res.best->slope <= res.mu, res.heuristic, res.mu, res.families};
}

inline bool is_stable(const HodgeSystem& e, const SearchConfig& cfg = {}) {
  SearchResult res = search_subobjects(e, cfg);
  return !res.best || res.best->slope < res.mu;
}

}  // namespace hodgelim
