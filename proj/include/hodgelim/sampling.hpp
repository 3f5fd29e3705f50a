#pragma once

// Seeded generators of Fuchsian systems with rational semisimple residues.

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "hodgelim/connection.hpp"
#include "hodgelim/kostov.hpp"

namespace hodgelim {

inline const std::vector<Rat>& weight_menu() {
  static const std::vector<Rat> m{Rat(0), Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(3, 4)};
  return m;
}

namespace detail {

inline Rat sample_rat(std::mt19937_64& rng, long h, long den) {
  std::uniform_int_distribution<long> n(-h, h), d(1, den);
  return Rat(n(rng), d(rng));
}

inline RatMatrix sample_invertible(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = sample_rat(rng, 2, 1);
    if (rank(m) == n) return m;
  }
}

inline RatMatrix inverse(const RatMatrix& m) {
  const std::size_t n = m.rows();
  Rref rr = rref(m.hcat(RatMatrix::identity(n)));
  if (rr.pivots.size() < n || rr.pivots[n - 1] != n - 1) throw std::invalid_argument("inverse: singular matrix");
  std::vector<std::size_t> idx(n);
  for (std::size_t j = 0; j < n; ++j) idx[j] = n + j;
  return rr.reduced.select_cols(idx);
}

inline RatMatrix diag(const std::vector<Rat>& d) {
  RatMatrix m(d.size(), d.size(), Rat(0));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

inline std::vector<Rat> distinct_values(std::mt19937_64& rng, std::size_t n, long h, long den) {
  std::vector<Rat> v;
  while (v.size() < n) {
    Rat x = sample_rat(rng, h, den);
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  }
  return v;
}

}  // namespace detail

inline std::vector<Rat> default_points(std::size_t k) {
  std::vector<Rat> p;
  for (std::size_t i = 0; i < k; ++i) p.emplace_back(static_cast<long>(i));
  return p;
}

// Flags from eigenspaces with one weight per distinct eigenvalue drawn from
// the menu (distinct weights at a point, so steps are whole eigenspaces).
inline ParabolicData menu_parabolic(std::mt19937_64& rng, const std::vector<Rat>& points, const std::vector<RatMatrix>& residues) {
  ParabolicData pd;
  pd.points = points;
  for (const auto& a : residues) {
    auto eig = eigen_decomposition(a);
    std::vector<Rat> menu = weight_menu();
    std::shuffle(menu.begin(), menu.end(), rng);
    std::vector<std::pair<Rat, RatMatrix>> steps;
    for (std::size_t j = 0; j < eig.size(); ++j) steps.push_back({menu[j], eig[j].space});
    pd.flags.push_back(FiberFlag::from_steps(a.rows(), steps));
  }
  return pd;
}

// Random residues with sum zero: the first k-2 are random conjugates of
// diagonal matrices, the last two split the remainder into lower and upper
// triangular parts (in a random frame) with distinct diagonals.
inline std::vector<RatMatrix> random_residues(std::mt19937_64& rng, std::size_t r, std::size_t k) {
  if (k < 3) throw std::invalid_argument("random_residues: need at least 3 points");
  std::vector<RatMatrix> res;
  RatMatrix sum(r, r, Rat(0));
  for (std::size_t i = 0; i + 2 < k; ++i) {
    RatMatrix h = detail::sample_invertible(rng, r);
    RatMatrix a = h * detail::diag(detail::distinct_values(rng, r, 3, 4)) * detail::inverse(h);
    sum = sum + a;
    res.push_back(a);
  }
  RatMatrix h = detail::sample_invertible(rng, r);
  RatMatrix hi = detail::inverse(h);
  RatMatrix mm = hi * (RatMatrix(r, r, Rat(0)) - sum) * h;
  for (;;) {
    auto d = detail::distinct_values(rng, r, 3, 4);
    std::vector<Rat> rest;
    for (std::size_t i = 0; i < r; ++i) rest.push_back(mm(i, i) - d[i]);
    std::vector<Rat> sorted = rest;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    RatMatrix lo(r, r, Rat(0)), up(r, r, Rat(0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        if (i > j) lo(i, j) = mm(i, j);
        if (i < j) up(i, j) = mm(i, j);
      }
    for (std::size_t i = 0; i < r; ++i) {
      lo(i, i) = d[i];
      up(i, i) = rest[i];
    }
    res.push_back(h * lo * hi);
    res.push_back(h * up * hi);
    return res;
  }
}

// Residues are redrawn until the eigenvalue data is Kostov-generic, which
// makes the system irreducible.
inline FuchsianSystem random_system(std::mt19937_64& rng, std::size_t r, std::size_t k) {
  FuchsianSystem s;
  s.rank = r;
  s.points = default_points(k);
  for (;;) {
    s.residues = random_residues(rng, r, k);
    std::vector<std::vector<Rat>> eig;
    for (const auto& a : s.residues) {
      std::vector<Rat> v;
      for (const auto& e : eigen_decomposition(a))
        for (std::size_t m = 0; m < e.multiplicity; ++m) v.push_back(e.value);
      eig.push_back(v);
    }
    if (kostov_generic(eig)) break;
  }
  s.par = menu_parabolic(rng, s.points, s.residues);
  return s;
}

// Rank-2 residues with eigenvalues {a_i, -a_i} at the given points (a_i
// nonzero). The last two residues are fitted so that the sum vanishes.
inline std::vector<RatMatrix> residues_with_eigenvalues(std::mt19937_64& rng, const std::vector<Rat>& a) {
  const std::size_t k = a.size();
  if (k < 3) throw std::invalid_argument("residues_with_eigenvalues: need at least 3 points");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<RatMatrix> res;
    RatMatrix sum(2, 2, Rat(0));
    for (std::size_t i = 0; i + 2 < k; ++i) {
      RatMatrix h = detail::sample_invertible(rng, 2);
      RatMatrix m = h * detail::diag({a[i], -a[i]}) * detail::inverse(h);
      sum = sum + m;
      res.push_back(m);
    }
    // A(s) = h [[b, -2bs], [0, -b]] h^{-1}; det(sum + A(s)) is affine in s.
    const Rat b = a[k - 2];
    RatMatrix h = detail::sample_invertible(rng, 2), hi = detail::inverse(h);
    auto a_of = [&](const Rat& s) {
      RatMatrix u(2, 2, Rat(0));
      u(0, 0) = b;
      u(0, 1) = Rat(-2) * b * s;
      u(1, 1) = -b;
      return h * u * hi;
    };
    auto det2 = [](const RatMatrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); };
    const Rat f0 = det2(sum + a_of(Rat(0))), f1 = det2(sum + a_of(Rat(1)));
    const Rat want = -a[k - 1] * a[k - 1];
    if (f1 == f0) continue;
    const Rat s = (want - f0) / (f1 - f0);
    RatMatrix last = a_of(s);
    res.push_back(last);
    res.push_back(RatMatrix(2, 2, Rat(0)) - sum - last);
    return res;
  }
  throw std::runtime_error("residues_with_eigenvalues: no fit found");
}

// Rank-2 system with eigenvalues {±a_i}; weights lambda - lambda_min.
inline FuchsianSystem eigen_system(std::mt19937_64& rng, const std::vector<Rat>& a) {
  FuchsianSystem s;
  s.rank = 2;
  s.points = default_points(a.size());
  s.residues = residues_with_eigenvalues(rng, a);
  s.par = eigen_parabolic(s.points, s.residues);
  return s;
}

}  // namespace hodgelim
