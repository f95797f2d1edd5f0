#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "caravan/errors.hpp"

namespace caravan {

using Int = boost::multiprecision::cpp_int;

inline Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }
inline Int int_abs(const Int& a) { return boost::multiprecision::abs(a); }

// Exact rational number, always reduced, denominator > 0.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(Int n) : num_(std::move(n)), den_(1) {}
  Rational(Int n, Int d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  static Rational parse(std::string_view text);

  const Int& num() const { return num_; }
  const Int& den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }
  Rational abs() const { return Rational(int_abs(num_), den_); }

  Rational operator-() const { return Rational(-num_, den_); }
  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Rational operator*(const Rational& o) const { return Rational(num_ * o.num_, den_ * o.den_); }
  Rational operator/(const Rational& o) const {
    if (o.num_ == 0) throw InvalidInputError("rational division by zero");
    return Rational(num_ * o.den_, den_ * o.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  // gcd on fractions: gcd(p1/q1, p2/q2) = gcd(p1*q2, p2*q1) / (q1*q2), reduced,
  // taken non-negative. gcd(x, 0) = |x|.
  static Rational frac_gcd(const Rational& a, const Rational& b) {
    return Rational(int_gcd(a.num_ * b.den_, b.num_ * a.den_), a.den_ * b.den_);
  }

  std::string str() const {
    std::string s = num_.str();
    if (den_ != 1) s += "/" + den_.str();
    return s;
  }

  double to_double() const {
    return num_.convert_to<double>() / den_.convert_to<double>();
  }

 private:
  void normalize() {
    if (den_ == 0) throw InvalidInputError("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    Int g = int_gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  Int num_;
  Int den_;
};

inline Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  auto parse_int = [](std::string_view part) -> Int {
    if (part.empty()) throw ParseError("empty integer literal");
    std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (start == part.size()) throw ParseError("sign without digits");
    for (std::size_t i = start; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') {
        throw ParseError("bad integer literal: " + std::string(part));
      }
    }
    return Int(std::string(part));
  };
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Int n = parse_int(text.substr(0, slash));
  Int d = parse_int(text.substr(slash + 1));
  if (d == 0) throw ParseError("zero denominator: " + std::string(text));
  return Rational(std::move(n), std::move(d));
}

}  // namespace caravan
