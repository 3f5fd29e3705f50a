#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hodgelim/rational.hpp"

namespace hodgelim {

// Univariate polynomial over Q in the affine coordinate t, constant term
// first. Never stores trailing zero coefficients; the zero polynomial has
// no degree (degree() is nullopt).
class Poly {
 public:
  Poly() = default;
  Poly(const Rat& c) { if (!c.is_zero()) c_.push_back(c); }  // NOLINT
  Poly(long c) : Poly(Rat(c)) {}                             // NOLINT
  Poly(int c) : Poly(Rat(c)) {}                              // NOLINT
  Poly(std::initializer_list<Rat> cs) : c_(cs) { trim(); }
  explicit Poly(std::vector<Rat> cs) : c_(std::move(cs)) { trim(); }

  static Poly t() { return Poly(std::vector<Rat>{Rat(0), Rat(1)}); }
  static Poly monomial(const Rat& c, int k) {
    if (c.is_zero()) return {};
    std::vector<Rat> cs(static_cast<std::size_t>(k) + 1, Rat(0));
    cs.back() = c;
    return Poly(std::move(cs));
  }
  // t - a
  static Poly linear(const Rat& a) { return Poly({-a, Rat(1)}); }

  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  [[nodiscard]] std::optional<int> degree() const {
    if (c_.empty()) return std::nullopt;
    return static_cast<int>(c_.size()) - 1;
  }
  // Degree test against a bound that may be negative: the zero polynomial
  // satisfies every bound.
  [[nodiscard]] bool degree_at_most(int bound) const {
    return c_.empty() || static_cast<int>(c_.size()) - 1 <= bound;
  }
  [[nodiscard]] const std::vector<Rat>& coeffs() const { return c_; }
  [[nodiscard]] Rat coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return Rat(0);
    return c_[static_cast<std::size_t>(k)];
  }
  [[nodiscard]] Rat lead() const { return c_.empty() ? Rat(0) : c_.back(); }

  [[nodiscard]] Rat eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  [[nodiscard]] Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rat> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Rat(static_cast<long>(k));
    return Poly(std::move(d));
  }

  [[nodiscard]] Poly monic() const {
    if (is_zero()) return {};
    Rat l = lead();
    Poly r = *this;
    for (auto& x : r.c_) x /= l;
    return r;
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rat> r(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend Poly operator*(const Rat& s, const Poly& p) {
    if (s.is_zero()) return {};
    Poly r = p;
    for (auto& x : r.c_) x *= s;
    return r;
  }
  // Multiply by t^k.
  [[nodiscard]] Poly shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    std::vector<Rat> r(static_cast<std::size_t>(k), Rat(0));
    r.insert(r.end(), c_.begin(), c_.end());
    return Poly(std::move(r));
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  friend std::ostream& operator<<(std::ostream& os, const Poly& p) {
    os << '[';
    for (std::size_t i = 0; i < p.c_.size(); ++i) os << (i ? "," : "") << p.c_[i];
    return os << ']';
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rat> c_;
};

// Euclidean division a = q*b + r with deg r < deg b.
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
  std::vector<Rat> rem = a.coeffs();
  const int db = *b.degree();
  const Rat lb = b.lead();
  if (static_cast<int>(rem.size()) - 1 < db) return {Poly{}, a};
  std::vector<Rat> q(rem.size() - static_cast<std::size_t>(db), Rat(0));
  for (int k = static_cast<int>(rem.size()) - 1; k >= db; --k) {
    const Rat c = rem[static_cast<std::size_t>(k)] / lb;
    q[static_cast<std::size_t>(k - db)] = c;
    if (c.is_zero()) continue;
    for (int j = 0; j <= db; ++j)
      rem[static_cast<std::size_t>(k - db + j)] -= c * b.coeffs()[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Poly(std::move(q)), Poly(std::move(rem))};
}

// Exact quotient; throws when b does not divide a.
inline Poly exact_div(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw std::logic_error("Poly: inexact division");
  return q;
}

// Monic gcd; gcd(0, 0) = 0.
inline Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Largest k with (t - x)^k | p. p must be nonzero.
inline int root_multiplicity(Poly p, const Rat& x) {
  if (p.is_zero()) throw std::domain_error("root_multiplicity of zero polynomial");
  int k = 0;
  const Poly f = Poly::linear(x);
  while (p.eval(x).is_zero()) {
    p = exact_div(p, f);
    ++k;
  }
  return k;
}

}  // namespace hodgelim
