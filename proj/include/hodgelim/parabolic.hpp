#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hodgelim/bundle.hpp"

namespace hodgelim {

// Weighted flag on one fiber. Step j carries weight weights[j] (strictly
// decreasing in j); spaces[j] is the cumulative subspace spanned by steps
// 0..j, i.e. the part of weight >= weights[j]. The last space is the whole
// fiber. Induced flags keep every step even when its increment is empty so
// that step indices agree across subquotients.
struct FiberFlag {
  std::size_t dim = 0;
  std::vector<Rat> weights;
  std::vector<RatMatrix> spaces;  // column bases

  static FiberFlag trivial(std::size_t dim) {
    return {dim, {Rat(0)}, {RatMatrix::identity(dim)}};
  }

  // steps: (weight, spanning vectors of the increment), any order.
  static FiberFlag from_steps(std::size_t dim, std::vector<std::pair<Rat, RatMatrix>> steps) {
    if (steps.empty()) return trivial(dim);
    std::sort(steps.begin(), steps.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    FiberFlag f;
    f.dim = dim;
    RatMatrix acc(dim, 0);
    for (std::size_t j = 0; j < steps.size(); ++j) {
      const Rat& w = steps[j].first;
      if (w < Rat(0) || w >= Rat(1)) throw std::invalid_argument("FiberFlag: weight outside [0,1)");
      if (j > 0 && w == steps[j - 1].first) throw std::invalid_argument("FiberFlag: repeated weight");
      if (steps[j].second.rows() != dim) throw std::invalid_argument("FiberFlag: vector dimension mismatch");
      const std::size_t before = acc.cols();
      acc = column_basis(acc.hcat(steps[j].second));
      if (acc.cols() != before + steps[j].second.cols())
        throw std::invalid_argument("FiberFlag: step vectors are dependent on earlier steps");
      f.weights.push_back(w);
      f.spaces.push_back(acc);
    }
    if (acc.cols() != dim) throw std::invalid_argument("FiberFlag: steps do not span the fiber");
    return f;
  }

  [[nodiscard]] std::size_t step_dim(std::size_t j) const { return spaces[j].cols(); }
  [[nodiscard]] std::size_t steps() const { return weights.size(); }

  // Sum of weight * dimension of each graded piece.
  [[nodiscard]] Rat contribution() const {
    Rat c(0);
    std::size_t prev = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      c += weights[j] * Rat(static_cast<long>(spaces[j].cols() - prev));
      prev = spaces[j].cols();
    }
    return c;
  }

  // Induced flag on a subspace given by an injective dim x s matrix.
  [[nodiscard]] FiberFlag restrict_to(const RatMatrix& inc) const {
    FiberFlag f;
    f.dim = inc.cols();
    f.weights = weights;
    for (const auto& sp : spaces) {
      RatMatrix ann = annihilator(sp, dim);
      f.spaces.push_back(ann.rows() == 0 ? RatMatrix::identity(f.dim) : nullspace(ann * inc));
    }
    return f;
  }

  // Image flag under a surjective q x dim matrix.
  [[nodiscard]] FiberFlag push_forward(const RatMatrix& proj) const {
    FiberFlag f;
    f.dim = proj.rows();
    f.weights = weights;
    for (const auto& sp : spaces) f.spaces.push_back(sp.cols() == 0 ? RatMatrix(f.dim, 0) : column_basis(proj * sp));
    return f;
  }

  // Step index of a one-dimensional subspace: smallest j with v in spaces[j].
  [[nodiscard]] std::size_t step_of(const std::vector<Rat>& v) const {
    for (std::size_t j = 0; j < spaces.size(); ++j)
      if (rank(spaces[j].hcat(RatMatrix::column(v))) == spaces[j].cols()) return j;
    throw std::logic_error("FiberFlag::step_of: vector outside fiber");
  }
};

// Parabolic structure on an ambient bundle: one weighted flag per marked
// point. Points are finite and distinct.
struct ParabolicData {
  std::vector<Rat> points;
  std::vector<FiberFlag> flags;

  [[nodiscard]] std::size_t size() const { return points.size(); }

  static ParabolicData trivial(std::vector<Rat> points, std::size_t dim) {
    ParabolicData pd;
    pd.points = std::move(points);
    pd.flags.assign(pd.points.size(), FiberFlag::trivial(dim));
    return pd;
  }

  void validate(std::size_t dim) const {
    if (flags.size() != points.size()) throw std::invalid_argument("ParabolicData: one flag per point required");
    std::set<Rat> seen(points.begin(), points.end());
    if (seen.size() != points.size()) throw std::invalid_argument("ParabolicData: points must be distinct");
    for (const auto& f : flags)
      if (f.dim != dim) throw std::invalid_argument("ParabolicData: flag dimension mismatch");
  }

  [[nodiscard]] Rat total_weight() const {
    Rat c(0);
    for (const auto& f : flags) c += f.contribution();
    return c;
  }

  // Flags induced on a subbundle (fiber = inclusion evaluated at each point).
  [[nodiscard]] ParabolicData restrict_to(const Subbundle& sub) const {
    ParabolicData pd;
    pd.points = points;
    for (std::size_t k = 0; k < points.size(); ++k)
      pd.flags.push_back(flags[k].restrict_to(evaluate(sub.matrix(), points[k])));
    return pd;
  }
  // Image flags on a quotient (or along any fiberwise surjection).
  [[nodiscard]] ParabolicData push_forward(const BundleMap& proj) const {
    ParabolicData pd;
    pd.points = points;
    for (std::size_t k = 0; k < points.size(); ++k)
      pd.flags.push_back(flags[k].push_forward(evaluate(proj.matrix, points[k])));
    return pd;
  }
};

// deg(sub) + sum over points and steps of weight * dim of the induced
// graded piece of the fiber of sub.
inline Rat par_degree(const Subbundle& sub, const ParabolicData& pd) {
  pd.validate(sub.ambient().rank());
  return Rat(static_cast<long>(sub.degree())) + pd.restrict_to(sub).total_weight();
}

}  // namespace hodgelim
