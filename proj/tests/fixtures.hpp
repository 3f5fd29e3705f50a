#pragma once

#include "hodgelim/connection.hpp"

namespace hodgelim::fixtures {

inline RatMatrix mat2(Rat a, Rat b, Rat c, Rat d) { return RatMatrix::from_rows({{a, b}, {c, d}}); }

inline RatMatrix col2(Rat a, Rat b) { return RatMatrix::column({a, b}); }

// Points 0, 1, 2; all residues upper triangular, so e1 spans a common
// invariant line.
inline FuchsianSystem f1(bool swap_first_flag = false) {
  FuchsianSystem s;
  s.rank = 2;
  s.points = {Rat(0), Rat(1), Rat(2)};
  s.residues = {mat2(0, 1, 0, Rat(1, 2)), mat2(Rat(1, 2), -1, 0, 0), mat2(Rat(-1, 2), 0, 0, Rat(-1, 2))};
  s.par.points = s.points;
  // eigenvalue-1/2 eigenspace of A1 is spanned by (2,1), the 0-eigenspace by e1
  RatMatrix half = col2(2, 1), zero = col2(1, 0);
  if (swap_first_flag) std::swap(half, zero);
  s.par.flags.push_back(FiberFlag::from_steps(2, {{Rat(1, 2), half}, {Rat(0), zero}}));
  s.par.flags.push_back(FiberFlag::from_steps(2, {{Rat(1, 2), col2(1, 0)}, {Rat(0), col2(1, 1)}}));
  s.par.flags.push_back(FiberFlag::trivial(2));
  return s;
}

// E^0 = O(-1), E^1 = O over points 0, 1, 2, theta = 3/2.
inline HodgeSystem oper() {
  const std::vector<Rat> pts{Rat(0), Rat(1), Rat(2)};
  HodgeSystem e;
  e.points = pts;
  e.levels = {{SplitBundle({-1}), ParabolicData::trivial(pts, 1)}, {SplitBundle({0}), ParabolicData::trivial(pts, 1)}};
  PolyMatrix th(1, 1);
  th(0, 0) = Poly(Rat(3, 2));
  e.theta.push_back(BundleMap{e.levels[1].bundle, e.levels[0].bundle, 1, th});
  return e;
}

// Same bundles with weight 1/4 on E^0 at every point, so theta is strongly
// parabolic; stable since par deg E^0 = -1/4.
inline HodgeSystem weighted_oper() {
  HodgeSystem e = oper();
  for (auto& f : e.levels[0].par.flags) f = FiberFlag{1, {Rat(1, 4)}, {RatMatrix::identity(1)}};
  return e;
}

// Four points 0..3, E^0 = O(-1) with weight 1/5, E^1 = O, theta = 1 + t.
inline HodgeSystem weighted_oper4() {
  const std::vector<Rat> pts{Rat(0), Rat(1), Rat(2), Rat(3)};
  HodgeSystem e;
  e.points = pts;
  e.levels = {{SplitBundle({-1}), ParabolicData::trivial(pts, 1)}, {SplitBundle({0}), ParabolicData::trivial(pts, 1)}};
  for (auto& f : e.levels[0].par.flags) f = FiberFlag{1, {Rat(1, 5)}, {RatMatrix::identity(1)}};
  PolyMatrix th(1, 1);
  th(0, 0) = Poly{Rat(1), Rat(1)};
  e.theta.push_back(BundleMap{e.levels[1].bundle, e.levels[0].bundle, 2, th});
  return e;
}

}  // namespace hodgelim::fixtures
