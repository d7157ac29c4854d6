#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "urysohn/error.hpp"

namespace urysohn {

// Exact rational backed by GMP. Always normalized (lowest terms, positive
// denominator). Data values are nonnegative; signed intermediates are allowed.
class Rat {
 public:
  Rat() = default;
  Rat(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(long num, long den) {
    if (den == 0) throw PreconditionError("zero denominator");
    q_ = mpq_class(mpz_class(num), mpz_class(den));
    q_.canonicalize();
  }
  explicit Rat(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  static Rat dyadic(unsigned k) {
    mpz_class den = 1;
    den <<= k;
    mpq_class q(mpz_class(1), den);
    return Rat(q);
  }

  // Parses "num/den" with den > 0; only digits, optional leading '-' on num
  // when allow_negative is set.
  static Rat parse(std::string_view s, bool allow_negative = false) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos || slash == 0 || slash + 1 == s.size())
      throw ParseError("rational must be num/den: '" + std::string(s) + "'");
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    bool neg = false;
    if (num.front() == '-') {
      if (!allow_negative) throw ParseError("negative rational: '" + std::string(s) + "'");
      neg = true;
      num.remove_prefix(1);
    }
    auto digits = [](std::string_view d) {
      if (d.empty()) return false;
      for (char c : d)
        if (c < '0' || c > '9') return false;
      return true;
    };
    if (!digits(num) || !digits(den))
      throw ParseError("malformed rational: '" + std::string(s) + "'");
    mpz_class n(std::string(num), 10), d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator: '" + std::string(s) + "'");
    if (neg) n = -n;
    return Rat(mpq_class(n, d));
  }

  std::string str() const {
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }
  double to_double() const { return q_.get_d(); }
  const mpq_class& raw() const { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }

  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw PreconditionError("division by zero");
    q_ /= o.q_;
    return *this;
  }
  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.q_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  mpq_class q_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }
inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }
// a - b floored at zero
inline Rat monus(const Rat& a, const Rat& b) { return a > b ? a - b : Rat(0); }
inline Rat clamp(const Rat& r, const Rat& lo, const Rat& hi) {
  if (r < lo) return lo;
  if (r > hi) return hi;
  return r;
}

}  // namespace urysohn

template <>
struct std::hash<urysohn::Rat> {
  std::size_t operator()(const urysohn::Rat& r) const {
    return std::hash<std::string>{}(r.str());
  }
};
