#pragma once

// JSON input and reports. Every number is an exact rational string.

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hodgelim/cohom.hpp"
#include "hodgelim/kostov.hpp"
#include "hodgelim/strata.hpp"

namespace hodgelim::io {

using Json = nlohmann::ordered_json;

inline Rat rat_from(const Json& j) {
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  throw std::invalid_argument("expected a rational string, got " + j.dump());
}

inline std::string rat_str(const Rat& r) { return r.str(); }

inline std::vector<Rat> rats_from(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of rationals");
  std::vector<Rat> v;
  for (const auto& x : j) v.push_back(rat_from(x));
  return v;
}

inline Json rats_json(const std::vector<Rat>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rat_str(x));
  return a;
}

inline RatMatrix matrix_from(const Json& j, std::size_t r) {
  if (!j.is_array() || j.size() != r) throw std::invalid_argument("residue must have rank rows");
  RatMatrix m(r, r, Rat(0));
  for (std::size_t i = 0; i < r; ++i) {
    const auto row = rats_from(j[i]);
    if (row.size() != r) throw std::invalid_argument("residue row has wrong length");
    for (std::size_t c = 0; c < r; ++c) m(i, c) = row[c];
  }
  return m;
}

inline Json matrix_json(const RatMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rat_str(m(i, c)));
    a.push_back(row);
  }
  return a;
}

namespace detail {

inline FiberFlag flag_from(const Json& steps, std::size_t r) {
  if (!steps.is_array()) throw std::invalid_argument("parabolic steps must be an array");
  std::vector<std::pair<Rat, RatMatrix>> st;
  for (const auto& s : steps) {
    const Rat w = rat_from(s.at("weight"));
    const Json& vecs = s.at("vectors");
    if (!vecs.is_array()) throw std::invalid_argument("step vectors must be an array");
    RatMatrix m(r, vecs.size(), Rat(0));
    for (std::size_t c = 0; c < vecs.size(); ++c) {
      const auto v = rats_from(vecs[c]);
      if (v.size() != r) throw std::invalid_argument("step vector has wrong length");
      for (std::size_t i = 0; i < r; ++i) m(i, c) = v[i];
    }
    st.emplace_back(w, m);
  }
  return FiberFlag::from_steps(r, st);
}

}  // namespace detail

// { "rank", "points", "residues", "parabolic"? }. Without "parabolic" the
// flags are the eigenspace filtrations with weights lambda - lambda_min.
inline FuchsianSystem system_from_json(const Json& j) {
  try {
    FuchsianSystem s;
    const long r = j.at("rank").get<long>();
    if (r <= 0) throw std::invalid_argument("rank must be positive");
    s.rank = static_cast<std::size_t>(r);
    s.points = rats_from(j.at("points"));
    const Json& res = j.at("residues");
    if (!res.is_array()) throw std::invalid_argument("residues must be an array");
    for (const auto& m : res) s.residues.push_back(matrix_from(m, s.rank));
    if (s.residues.size() != s.points.size()) throw std::invalid_argument("one residue per point required");
    if (j.contains("parabolic")) {
      const Json& par = j.at("parabolic");
      if (!par.is_array()) throw std::invalid_argument("parabolic must be an array");
      s.par.points = s.points;
      s.par.flags.assign(s.points.size(), FiberFlag::trivial(s.rank));
      std::vector<bool> seen(s.points.size(), false);
      for (const auto& e : par) {
        const Rat x = rat_from(e.at("point"));
        auto it = std::find(s.points.begin(), s.points.end(), x);
        if (it == s.points.end()) throw std::invalid_argument("parabolic point " + x.str() + " is not a residue point");
        const auto i = static_cast<std::size_t>(it - s.points.begin());
        if (seen[i]) throw std::invalid_argument("parabolic point " + x.str() + " given twice");
        seen[i] = true;
        s.par.flags[i] = detail::flag_from(e.at("steps"), s.rank);
      }
    } else {
      s.par = eigen_parabolic(s.points, s.residues);
    }
    validate_system(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed input: ") + e.what());
  }
}

inline Json system_json(const FuchsianSystem& s) {
  Json j;
  j["rank"] = s.rank;
  j["points"] = rats_json(s.points);
  Json res = Json::array();
  for (const auto& a : s.residues) res.push_back(matrix_json(a));
  j["residues"] = res;
  Json par = Json::array();
  for (std::size_t i = 0; i < s.par.flags.size(); ++i) {
    const FiberFlag& f = s.par.flags[i];
    Json steps = Json::array();
    for (std::size_t t = 0; t < f.steps(); ++t) {
      const RatMatrix prev = t == 0 ? RatMatrix(f.dim, 0) : f.spaces[t - 1];
      const RatMatrix sp = column_basis(prev.hcat(f.spaces[t]));
      const std::size_t from = prev.cols();
      Json vecs = Json::array();
      for (std::size_t c = from; c < sp.cols(); ++c) {
        Json v = Json::array();
        for (std::size_t i2 = 0; i2 < sp.rows(); ++i2) v.push_back(rat_str(sp(i2, c)));
        vecs.push_back(v);
      }
      steps.push_back(Json{{"weight", rat_str(f.weights[t])}, {"vectors", vecs}});
    }
    par.push_back(Json{{"point", rat_str(s.par.points[i])}, {"steps", steps}});
  }
  j["parabolic"] = par;
  return j;
}

inline std::vector<std::vector<Rat>> eigenvalues_from_json(const Json& j) {
  try {
    const Json& e = j.at("eigenvalues");
    if (!e.is_array()) throw std::invalid_argument("eigenvalues must be an array");
    std::vector<std::vector<Rat>> out;
    for (const auto& pt : e) out.push_back(rats_from(pt));
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed input: ") + e.what());
  }
}

inline Json level_json(const LevelInfo& l) {
  return Json{{"p", l.p}, {"rank", l.rank}, {"degree", l.degree}, {"pardeg", rat_str(l.par_degree)}};
}

inline Json levels_json(const std::vector<LevelInfo>& ls) {
  Json a = Json::array();
  for (const auto& l : ls) a.push_back(level_json(l));
  return a;
}

inline Json trace_step_json(const TraceStep& t) {
  Json j;
  j["step"] = t.step;
  if (t.invariants) {
    j["beta"] = rat_str(t.invariants->beta);
    j["rho"] = t.invariants->rho;
    j["gamma"] = rat_str(t.invariants->gamma);
  } else {
    j["beta"] = nullptr;
    j["rho"] = nullptr;
    j["gamma"] = nullptr;
  }
  j["levels"] = levels_json(t.levels);
  j["destabilizer"] = t.invariants ? levels_json(t.destabilizer) : Json(nullptr);
  j["heuristic"] = t.heuristic;
  j["contiguous"] = t.contiguous;
  return j;
}

// One JSON object per line.
inline std::string trace_lines(const PartialOper& po) {
  std::string out;
  for (const auto& t : po.trace) out += trace_step_json(t).dump() + "\n";
  return out;
}

inline Json signature_json(const StratumSignature& s) {
  Json j;
  j["levels"] = levels_json(s.levels);
  j["is_oper"] = s.is_oper;
  j["is_trivial_filtration"] = s.is_trivial_filtration;
  return j;
}

inline Json limit_json(const PartialOper& po, const StratumSignature& sig) {
  Json j;
  j["steps"] = po.trace.empty() ? 0 : po.trace.back().step;
  j["filtration_ranks"] = po.filtration.ranks();
  j["heuristic"] = po.heuristic;
  j["signature"] = signature_json(sig);
  return j;
}

inline Json kostov_json(const std::vector<std::vector<Rat>>& eig) {
  Json j;
  Json pts = Json::array();
  for (const auto& e : eig) pts.push_back(rats_json(e));
  j["eigenvalues"] = pts;
  const auto v = kostov_violation(eig);
  j["generic"] = !v.has_value();
  if (v) j["violation"] = Json{{"sub_rank", v->sub_rank}, {"choice", v->choice}, {"sum", rat_str(v->sum)}};
  return j;
}

inline Json hyper_json(const HyperDims& h) { return Json{{"h0", h.h0}, {"h1", h.h1}, {"h2", h.h2}}; }

inline Json defdims_json(const DefDims& d) {
  Json j = hyper_json(d.total);
  Json g = Json::array();
  for (const auto& x : d.graded) g.push_back(Json{{"p", x.p}, {"dim", x.dims.h1}});
  j["graded"] = g;
  j["trace_free"] = hyper_json(d.trace_free);
  j["strong_parabolic"] = d.strong;
  return j;
}

inline Json arrangement_json(const WallArrangement& a) {
  Json j;
  j["params"] = a.params;
  j["everywhere_degenerate"] = a.everywhere_degenerate;
  Json ws = Json::array();
  for (const auto& w : a.walls) {
    Json sel = Json::array();
    for (const auto& s : w.selections) sel.push_back(s);
    ws.push_back(Json{{"normal", rats_json(w.normal)}, {"rhs", rat_str(w.rhs)}, {"selections", sel}});
  }
  j["walls"] = ws;
  return j;
}

inline Json scan_json(const ScanReport& r) {
  Json j;
  j["arrangement"] = arrangement_json(r.arrangement);
  Json ss = Json::array();
  for (const auto& s : r.samples) {
    Json x{{"id", s.id}, {"weights", rats_json(s.params)}, {"chamber", s.chamber}, {"distance", rat_str(s.distance)}};
    x["signature"] = s.signature ? signature_json(*s.signature) : Json(nullptr);
    if (!s.error.empty()) x["error"] = s.error;
    ss.push_back(x);
  }
  j["samples"] = ss;
  Json cs = Json::array();
  for (const auto& c : r.chambers)
    cs.push_back(Json{{"chamber", c.chamber}, {"samples", c.samples}, {"constant", c.constant}, {"distinct_types", c.distinct_types}});
  j["chambers"] = cs;
  j["all_constant"] = r.all_constant();
  return j;
}

}  // namespace hodgelim::io
