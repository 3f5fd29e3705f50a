#pragma once

#include <algorithm>
#include <random>

#include "hodgelim/matrix.hpp"
#include "hodgelim/hodge.hpp"

namespace hodgelim::gen {

inline Rat small_rat(std::mt19937_64& rng, long h = 3) {
  std::uniform_int_distribution<long> num(-h, h), den(1, 2);
  return Rat(num(rng), den(rng));
}

inline Poly random_poly(std::mt19937_64& rng, int max_deg, double zero_prob = 0.2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < zero_prob || max_deg < 0) return {};
  std::uniform_int_distribution<int> dd(0, max_deg);
  const int d = dd(rng);
  std::vector<Rat> cs;
  for (int k = 0; k <= d; ++k) cs.push_back(small_rat(rng));
  return Poly(std::move(cs));
}

inline PolyMatrix random_poly_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int max_deg) {
  PolyMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_poly(rng, max_deg);
  return m;
}

inline RatMatrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = small_rat(rng);
    if (rank(m) == n) return m;
  }
}

// Weights drawn from a fixed menu; adjacent basis vectors may share a step.
inline FiberFlag random_flag(std::mt19937_64& rng, std::size_t dim) {
  static const Rat menu[] = {Rat(0), Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(3, 4)};
  std::uniform_int_distribution<int> pick(0, 5);
  RatMatrix basis = random_invertible(rng, dim);
  std::vector<Rat> ws;
  while (ws.size() < dim) {
    Rat w = menu[pick(rng)];
    if (std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
  }
  std::vector<std::pair<Rat, RatMatrix>> steps;
  std::uniform_int_distribution<int> merge(0, 2);
  for (std::size_t j = 0; j < dim; ++j) {
    if (j > 0 && merge(rng) == 0) {
      steps.back().second = steps.back().second.hcat(basis.select_cols({j}));
      continue;
    }
    steps.push_back({ws[j], basis.select_cols({j})});
  }
  return FiberFlag::from_steps(dim, steps);
}

inline ParabolicData random_parabolic(std::mt19937_64& rng, const std::vector<Rat>& points, std::size_t dim) {
  ParabolicData pd;
  pd.points = points;
  for (std::size_t k = 0; k < points.size(); ++k) pd.flags.push_back(random_flag(rng, dim));
  return pd;
}

// Rank 2 or 3 graded system with random level shapes, degrees in [-2, 2],
// random flags and random theta.
inline HodgeSystem random_hodge(std::mt19937_64& rng, const std::vector<Rat>& points, std::size_t total_rank) {
  std::uniform_int_distribution<int> deg(-2, 2), shape(0, 2);
  HodgeSystem e;
  e.points = points;
  std::vector<std::size_t> ranks;
  const int s = shape(rng);
  if (total_rank == 2) ranks = s == 0 ? std::vector<std::size_t>{2} : std::vector<std::size_t>{1, 1};
  else ranks = s == 0 ? std::vector<std::size_t>{3} : s == 1 ? std::vector<std::size_t>{1, 2} : std::vector<std::size_t>{2, 1};
  for (auto r : ranks) {
    std::vector<int> d;
    for (std::size_t i = 0; i < r; ++i) d.push_back(deg(rng));
    e.levels.push_back({SplitBundle(d), random_parabolic(rng, points, r)});
  }
  const int tw = static_cast<int>(points.size()) - 2;
  for (std::size_t i = 0; i + 1 < e.levels.size(); ++i) {
    BundleMap th = BundleMap::zero(e.levels[i + 1].bundle, e.levels[i].bundle, tw);
    for (std::size_t a = 0; a < th.matrix.rows(); ++a)
      for (std::size_t b = 0; b < th.matrix.cols(); ++b) th.matrix(a, b) = random_poly(rng, std::min(3, th.bound(a, b)), 0.3);
    e.theta.push_back(th);
  }
  return e;
}

}  // namespace hodgelim::gen
