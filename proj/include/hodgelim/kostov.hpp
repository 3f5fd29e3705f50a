#pragma once

// Kostov genericity of residue eigenvalue data: no choice of 0 < r' < r
// eigenvalues at every point (the same r' everywhere) has integral sum.

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "hodgelim/matrix.hpp"

namespace hodgelim {

struct KostovViolation {
  std::size_t sub_rank = 0;
  std::vector<std::vector<std::size_t>> choice;  // indices per point
  Rat sum;
};

namespace detail {

inline bool kostov_search(const std::vector<std::vector<Rat>>& eig, std::size_t rp, std::size_t pt, Rat acc,
                          std::vector<std::vector<std::size_t>>& cur, std::optional<KostovViolation>& found) {
  if (pt == eig.size()) {
    if (acc.is_integer()) {
      found = KostovViolation{rp, cur, acc};
      return true;
    }
    return false;
  }
  for (const auto& c : hodgelim::combinations(eig[pt].size(), rp)) {
    Rat s = acc;
    for (auto i : c) s += eig[pt][i];
    cur.push_back(c);
    if (kostov_search(eig, rp, pt + 1, s, cur, found)) return true;
    cur.pop_back();
  }
  return false;
}

}  // namespace detail

// First violating selection in enumeration order, if any.
inline std::optional<KostovViolation> kostov_violation(const std::vector<std::vector<Rat>>& eigenvalues) {
  if (eigenvalues.empty()) throw std::invalid_argument("kostov: no points");
  const std::size_t r = eigenvalues.front().size();
  for (const auto& e : eigenvalues)
    if (e.size() != r) throw std::invalid_argument("kostov: eigenvalue lists must all have length r");
  std::optional<KostovViolation> found;
  for (std::size_t rp = 1; rp < r; ++rp) {
    std::vector<std::vector<std::size_t>> cur;
    if (detail::kostov_search(eigenvalues, rp, 0, Rat(0), cur, found)) return found;
  }
  return std::nullopt;
}

inline bool kostov_generic(const std::vector<std::vector<Rat>>& eigenvalues) {
  return !kostov_violation(eigenvalues);
}

}  // namespace hodgelim
