#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hodgelim {

// Arbitrary-precision rational in canonical form (reduced, positive
// denominator). Thin value wrapper over mpq_class so expression templates
// never leak into user code.
class Rat {
 public:
  Rat() = default;
  Rat(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(int v) : v_(static_cast<long>(v)) {}  // NOLINT
  Rat(long num, long den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rat(const mpz_class& z) : v_(z) {}

  // Parses "p", "-p", "p/q". Whitespace is not accepted.
  static Rat parse(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("Rat: empty string");
    std::string str(s);
    auto slash = str.find('/');
    auto valid_int = [](std::string_view t) {
      if (t.empty()) return false;
      std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
      if (i == t.size()) return false;
      for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
      return true;
    };
    auto strip_plus = [](std::string t) {
      if (!t.empty() && t[0] == '+') t.erase(0, 1);
      return t;
    };
    if (slash == std::string::npos) {
      if (!valid_int(str)) throw std::invalid_argument("Rat: bad literal '" + str + "'");
      return Rat(mpz_class(strip_plus(str), 10));
    }
    std::string n = str.substr(0, slash), d = str.substr(slash + 1);
    if (!valid_int(n) || !valid_int(d) || d[0] == '-' || d[0] == '+')
      throw std::invalid_argument("Rat: bad literal '" + str + "'");
    mpz_class den(d, 10);
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    mpq_class q(mpz_class(strip_plus(n), 10), den);
    return Rat(q);
  }

  [[nodiscard]] std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str(10);
    return v_.get_num().get_str(10) + "/" + v_.get_den().get_str(10);
  }

  [[nodiscard]] const mpq_class& raw() const { return v_; }
  [[nodiscard]] mpz_class num() const { return v_.get_num(); }
  [[nodiscard]] mpz_class den() const { return v_.get_den(); }
  [[nodiscard]] bool is_zero() const { return sgn(v_) == 0; }
  [[nodiscard]] int sign() const { return sgn(v_); }
  [[nodiscard]] bool is_integer() const { return v_.get_den() == 1; }

  [[nodiscard]] mpz_class floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return q;
  }
  [[nodiscard]] long floor_long() const {
    mpz_class f = floor();
    if (!f.fits_slong_p()) throw std::overflow_error("Rat: floor out of range");
    return f.get_si();
  }
  [[nodiscard]] Rat frac() const { return *this - Rat(floor()); }
  [[nodiscard]] Rat abs() const { return Rat(mpq_class(::abs(v_))); }
  [[nodiscard]] double to_double() const { return v_.get_d(); }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.v_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

}  // namespace hodgelim

template <>
struct std::hash<hodgelim::Rat> {
  std::size_t operator()(const hodgelim::Rat& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
