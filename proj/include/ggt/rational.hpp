#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "ggt/bigint.hpp"
#include "ggt/common.hpp"

namespace ggt {

/// Exact rational number: sign * num/den with den > 0 and gcd(num, den) = 1.
class Rational {
 public:
  Rational() : sign_(0), num_(), den_(1) {}
  Rational(std::int64_t v)
      : sign_(v > 0 ? 1 : v < 0 ? -1 : 0),
        num_(static_cast<std::uint64_t>(v < 0 ? -v : v)),
        den_(1) {}
  Rational(BigUint num, BigUint den, int sign = 1)
      : sign_(sign), num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }
  static Rational from_int(std::int64_t v) { return Rational(v); }
  static Rational make(std::int64_t num, std::int64_t den) {
    if (den == 0) throw computation_error("rational with zero denominator");
    int s = 1;
    if (num < 0) {
      s = -s;
      num = -num;
    }
    if (den < 0) {
      s = -s;
      den = -den;
    }
    return Rational(BigUint(static_cast<std::uint64_t>(num)),
                    BigUint(static_cast<std::uint64_t>(den)), s);
  }

  bool is_zero() const { return sign_ == 0; }
  bool is_integer() const { return den_.is_one() || sign_ == 0; }
  int sign() const { return sign_; }
  const BigUint& num() const { return num_; }
  const BigUint& den() const { return den_; }

  Rational operator-() const {
    Rational r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  Rational operator+(const Rational& o) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;
    BigUint a = num_ * o.den_;
    BigUint b = o.num_ * den_;
    BigUint d = den_ * o.den_;
    if (sign_ == o.sign_) return Rational(a + b, std::move(d), sign_);
    int c = a.compare(b);
    if (c == 0) return Rational();
    return c > 0 ? Rational(a - b, std::move(d), sign_)
                 : Rational(b - a, std::move(d), o.sign_);
  }
  Rational operator-(const Rational& o) const { return *this + (-o); }
  Rational operator*(const Rational& o) const {
    if (sign_ == 0 || o.sign_ == 0) return Rational();
    return Rational(num_ * o.num_, den_ * o.den_, sign_ * o.sign_);
  }
  Rational operator/(const Rational& o) const {
    if (o.sign_ == 0) throw computation_error("rational division by zero");
    if (sign_ == 0) return Rational();
    return Rational(num_ * o.den_, den_ * o.num_, sign_ * o.sign_);
  }

  int compare(const Rational& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_ ? -1 : 1;
    if (sign_ == 0) return 0;
    int c = (num_ * o.den_).compare(o.num_ * den_);
    return sign_ > 0 ? c : -c;
  }
  bool operator==(const Rational& o) const { return compare(o) == 0; }
  bool operator!=(const Rational& o) const { return compare(o) != 0; }
  bool operator<(const Rational& o) const { return compare(o) < 0; }
  bool operator<=(const Rational& o) const { return compare(o) <= 0; }
  bool operator>(const Rational& o) const { return compare(o) > 0; }
  bool operator>=(const Rational& o) const { return compare(o) >= 0; }

  /// "n/d" with sign folded into the numerator; integers print bare.
  std::string to_string() const {
    std::string s;
    if (sign_ < 0) s += "-";
    s += num_.to_decimal();
    if (!is_integer()) {
      s += "/";
      s += den_.to_decimal();
    }
    return s;
  }
  std::string num_string() const {
    return (sign_ < 0 ? "-" : "") + num_.to_decimal();
  }
  std::string den_string() const { return den_.to_decimal(); }

  /// Integer value; throws if not an integer.
  std::int64_t to_int() const {
    if (!is_integer()) throw computation_error("rational is not an integer");
    if (sign_ == 0) return 0;
    std::uint64_t v = num_.to_u64();
    return sign_ > 0 ? static_cast<std::int64_t>(v)
                     : -static_cast<std::int64_t>(v);
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw computation_error("rational with zero denominator");
    if (num_.is_zero()) {
      sign_ = 0;
      den_ = BigUint(1);
      return;
    }
    BigUint g = BigUint::gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
  }

  int sign_;
  BigUint num_;
  BigUint den_;
};

}  // namespace ggt
