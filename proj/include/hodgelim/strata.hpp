#pragma once

// Stratum signatures of limits, oper detection, Kostov walls in eigenvalue
// parameter space and chamber scans.

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "hodgelim/connection.hpp"
#include "hodgelim/kostov.hpp"
#include "hodgelim/sampling.hpp"

namespace hodgelim {

struct StratumSignature {
  std::vector<LevelInfo> levels;  // nonzero levels, lowest at p = 0
  bool is_oper = false;
  bool is_trivial_filtration = false;

  // (p, rank, degree) per level; the parabolic degrees move continuously
  // with the weights, so chamber comparisons use this coarser type.
  [[nodiscard]] std::vector<std::array<long, 3>> hodge_type() const {
    std::vector<std::array<long, 3>> t;
    for (const auto& l : levels) t.push_back({l.p, static_cast<long>(l.rank), l.degree});
    return t;
  }
  friend bool operator==(const StratumSignature&, const StratumSignature&) = default;
};

// All levels are line bundles and every theta is a nonzero constant with
// tight degree bound, i.e. an isomorphism E^p -> E^{p-1} (x) O(k-2).
inline bool is_oper(const HodgeSystem& e) {
  e.validate();
  for (const auto& l : e.levels)
    if (l.bundle.rank() != 1) return false;
  for (const auto& th : e.theta) {
    if (th.bound(0, 0) != 0) return false;
    if (th.matrix(0, 0).is_zero()) return false;
  }
  return true;
}

inline StratumSignature classify_signature(const HodgeSystem& e, const SearchConfig& cfg = {}) {
  if (!is_semistable(e, cfg).semistable) throw std::invalid_argument("classify_signature: input is not semistable");
  StratumSignature sig;
  std::optional<int> low;
  for (std::size_t i = 0; i < e.levels.size(); ++i) {
    const auto& l = e.levels[i];
    if (l.bundle.rank() == 0) continue;
    if (!low) low = e.p_of(i);
    sig.levels.push_back({e.p_of(i) - *low, l.bundle.rank(), l.bundle.degree(),
                          Rat(static_cast<long>(l.bundle.degree())) + l.par.total_weight()});
  }
  sig.is_trivial_filtration = sig.levels.size() == 1;
  sig.is_oper = is_oper(e);
  return sig;
}

// ---------------------------------------------------------------------------
// Walls. Eigenvalues are affine forms in parameters u_1..u_n.

struct AffineForm {
  std::vector<Rat> coeffs;
  Rat constant;

  [[nodiscard]] Rat eval(const std::vector<Rat>& u) const {
    Rat v = constant;
    for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * u[i];
    return v;
  }
  [[nodiscard]] bool is_constant() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rat& c) { return c.is_zero(); });
  }
  friend AffineForm operator+(AffineForm a, const AffineForm& b) {
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += b.coeffs[i];
    a.constant += b.constant;
    return a;
  }
};

struct EigenModel {
  std::size_t params = 0;
  std::vector<std::vector<AffineForm>> eigen;  // per point, r forms
  std::vector<std::pair<Rat, Rat>> box;        // open interval per parameter

  [[nodiscard]] std::size_t rank() const { return eigen.empty() ? 0 : eigen.front().size(); }
  [[nodiscard]] std::vector<std::vector<Rat>> at(const std::vector<Rat>& u) const {
    std::vector<std::vector<Rat>> out;
    for (const auto& pt : eigen) {
      std::vector<Rat> v;
      for (const auto& f : pt) v.push_back(f.eval(u));
      out.push_back(v);
    }
    return out;
  }
};

// Rank 2, eigenvalues {+u_i, -u_i} at point i, u_i in (0, 1/2).
inline EigenModel symmetric_rank2_model(std::size_t k) {
  EigenModel m;
  m.params = k;
  for (std::size_t i = 0; i < k; ++i) {
    AffineForm plus{std::vector<Rat>(k, Rat(0)), Rat(0)}, minus = plus;
    plus.coeffs[i] = Rat(1);
    minus.coeffs[i] = Rat(-1);
    m.eigen.push_back({plus, minus});
    m.box.push_back({Rat(0), Rat(1, 2)});
  }
  return m;
}

// Hyperplane normal . u = rhs, normalized so the first nonzero coefficient
// is 1; selections lists every (r', per-point index choice) producing it.
struct Wall {
  std::vector<Rat> normal;
  Rat rhs;
  std::vector<std::vector<std::vector<std::size_t>>> selections;

  [[nodiscard]] Rat value(const std::vector<Rat>& u) const {
    Rat v(0);
    for (std::size_t i = 0; i < normal.size(); ++i) v += normal[i] * u[i];
    return v - rhs;
  }
  // L-infinity distance from u to the hyperplane.
  [[nodiscard]] Rat distance(const std::vector<Rat>& u) const {
    Rat n1(0);
    for (const auto& c : normal) n1 += c.abs();
    return value(u).abs() / n1;
  }
};

struct WallArrangement {
  std::size_t params = 0;
  std::vector<Wall> walls;
  bool everywhere_degenerate = false;  // a constant selection sum is integral

  // Sign vector of a point off all walls; '0' marks a point on a wall.
  [[nodiscard]] std::string chamber_id(const std::vector<Rat>& u) const {
    std::string s;
    for (const auto& w : walls) {
      const int sg = w.value(u).sign();
      s += sg > 0 ? '+' : sg < 0 ? '-' : '0';
    }
    return s;
  }
  [[nodiscard]] Rat min_distance(const std::vector<Rat>& u) const {
    std::optional<Rat> d;
    for (const auto& w : walls) {
      Rat x = w.distance(u);
      if (!d || x < *d) d = x;
    }
    return d.value_or(Rat(1000000));
  }
};

namespace detail {

inline void selections(const EigenModel& m, std::size_t rp, std::size_t pt, AffineForm acc,
                       std::vector<std::vector<std::size_t>>& cur,
                       std::vector<std::pair<AffineForm, std::vector<std::vector<std::size_t>>>>& out) {
  if (pt == m.eigen.size()) {
    out.emplace_back(acc, cur);
    return;
  }
  for (const auto& c : hodgelim::combinations(m.eigen[pt].size(), rp)) {
    AffineForm a = acc;
    for (auto i : c) a = a + m.eigen[pt][i];
    cur.push_back(c);
    selections(m, rp, pt + 1, a, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

inline WallArrangement enumerate_walls(const EigenModel& m, bool allow_large = false) {
  const std::size_t r = m.rank();
  const std::size_t k = m.eigen.size();
  if (!allow_large && (r > 3 || k > 5)) throw std::invalid_argument("enumerate_walls: r <= 3 and k <= 5 required");
  if (m.box.size() != m.params) throw std::invalid_argument("enumerate_walls: one interval per parameter");
  for (const auto& pt : m.eigen) {
    if (pt.size() != r) throw std::invalid_argument("enumerate_walls: inconsistent eigenvalue counts");
    for (const auto& f : pt)
      if (f.coeffs.size() != m.params) throw std::invalid_argument("enumerate_walls: form length mismatch");
  }
  WallArrangement arr;
  arr.params = m.params;
  if (k == 0) return arr;
  std::map<std::pair<std::vector<Rat>, Rat>, std::size_t> index;
  for (std::size_t rp = 1; rp < r; ++rp) {
    std::vector<std::pair<AffineForm, std::vector<std::vector<std::size_t>>>> sels;
    std::vector<std::vector<std::size_t>> cur;
    detail::selections(m, rp, 0, AffineForm{std::vector<Rat>(m.params, Rat(0)), Rat(0)}, cur, sels);
    for (auto& [form, sel] : sels) {
      if (form.is_constant()) {
        if (form.constant.is_integer()) arr.everywhere_degenerate = true;
        continue;
      }
      // range of the form over the open box
      Rat lo = form.constant, hi = form.constant;
      for (std::size_t i = 0; i < m.params; ++i) {
        const Rat a = form.coeffs[i] * m.box[i].first, b = form.coeffs[i] * m.box[i].second;
        lo += std::min(a, b);
        hi += std::max(a, b);
      }
      Rat lead;
      for (const auto& c : form.coeffs)
        if (!c.is_zero()) {
          lead = c;
          break;
        }
      for (long n = Rat(lo).floor_long(); Rat(n) < hi; ++n) {
        if (!(Rat(n) > lo)) continue;
        std::vector<Rat> normal;
        for (const auto& c : form.coeffs) normal.push_back(c / lead);
        Rat rhs = (Rat(n) - form.constant) / lead;
        auto key = std::make_pair(normal, rhs);
        auto it = index.find(key);
        if (it == index.end()) {
          index.emplace(key, arr.walls.size());
          arr.walls.push_back({normal, rhs, {sel}});
        } else {
          arr.walls[it->second].selections.push_back(sel);
        }
      }
    }
  }
  std::sort(arr.walls.begin(), arr.walls.end(), [](const Wall& a, const Wall& b) {
    return std::tie(a.normal, a.rhs) < std::tie(b.normal, b.rhs);
  });
  return arr;
}

// ---------------------------------------------------------------------------
// Chamber scans for the symmetric rank-2 model.

struct ScanConfig {
  std::size_t points = 3;
  std::size_t per_chamber = 10;
  std::size_t attempts = 4000;  // candidate parameter points
  long denominator = 101;
  Rat min_distance = Rat(1, 50);
  std::uint64_t seed = 1;
  unsigned threads = 1;
  IterationConfig iteration;
};

struct ScanSample {
  std::size_t id = 0;
  std::vector<Rat> params;
  std::string chamber;
  Rat distance;
  std::optional<StratumSignature> signature;
  std::string error;
};

struct ChamberReport {
  std::string chamber;
  std::vector<std::size_t> samples;
  bool constant = true;  // all samples share one Hodge type
  std::size_t distinct_types = 0;
};

struct ScanReport {
  WallArrangement arrangement;
  std::vector<ScanSample> samples;
  std::vector<ChamberReport> chambers;
  [[nodiscard]] bool all_constant() const {
    return std::all_of(chambers.begin(), chambers.end(), [](const ChamberReport& c) { return c.constant; });
  }
};

inline StratumSignature limit_signature(const FuchsianSystem& s, const IterationConfig& cfg = {}) {
  return classify_signature(iterate_to_partial_oper(s, cfg).limit, cfg.search);
}

inline ScanReport chamber_scan(const ScanConfig& cfg) {
  const EigenModel model = symmetric_rank2_model(cfg.points);
  ScanReport rep;
  rep.arrangement = enumerate_walls(model);
  if (cfg.per_chamber == 0) return rep;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<long> num(1, (cfg.denominator - 1) / 2);
  std::map<std::string, std::size_t> count;
  for (std::size_t a = 0; a < cfg.attempts; ++a) {
    std::vector<Rat> u;
    for (std::size_t i = 0; i < model.params; ++i) u.push_back(Rat(num(rng), cfg.denominator));
    if (!kostov_generic(model.at(u))) continue;
    const Rat d = rep.arrangement.min_distance(u);
    if (d < cfg.min_distance) continue;
    const std::string id = rep.arrangement.chamber_id(u);
    if (count[id] >= cfg.per_chamber) continue;
    ++count[id];
    rep.samples.push_back({rep.samples.size(), u, id, d, std::nullopt, {}});
  }

  auto run = [&](ScanSample& smp) {
    try {
      std::mt19937_64 local(cfg.seed * 1000003ULL + smp.id);
      smp.signature = limit_signature(eigen_system(local, smp.params), cfg.iteration);
    } catch (const std::exception& ex) {
      smp.error = ex.what();
    }
  };
  if (cfg.threads <= 1) {
    for (auto& smp : rep.samples) run(smp);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < cfg.threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < rep.samples.size();) run(rep.samples[t]);
      });
    for (auto& th : pool) th.join();
  }

  std::map<std::string, ChamberReport> by;
  for (const auto& smp : rep.samples) {
    auto& c = by[smp.chamber];
    c.chamber = smp.chamber;
    c.samples.push_back(smp.id);
  }
  for (auto& [id, c] : by) {
    std::vector<std::vector<std::array<long, 3>>> types;
    for (auto i : c.samples) {
      const auto& smp = rep.samples[i];
      if (!smp.signature) {
        c.constant = false;
        continue;
      }
      auto t = smp.signature->hodge_type();
      if (std::find(types.begin(), types.end(), t) == types.end()) types.push_back(t);
    }
    c.distinct_types = types.size();
    if (types.size() > 1) c.constant = false;
    rep.chambers.push_back(c);
  }
  return rep;
}

}  // namespace hodgelim
