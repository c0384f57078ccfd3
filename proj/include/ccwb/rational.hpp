#pragma once

#include <cstdint>
#include <compare>
#include <string>

#include "ccwb/errors.hpp"

namespace ccwb {

// Exact rational arithmetic on int64 numerator/denominator.  All error and
// discrepancy values in this project have denominators bounded by products of
// a few matrix-sized counts, so int64 storage with __int128 intermediates is
// enough; any overflow of the reduced value throws instead of silently
// degrading to floating point.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(int64_t value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(int64_t num, int64_t den) { assign(num, den); }

  static Rational from_i128(__int128 num, __int128 den);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw parameter_error("Rational: division by zero");
    return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
  }

 private:
  using i128 = __int128;
  int64_t num_ = 0;
  int64_t den_ = 1;  // always > 0, gcd(|num|, den) == 1

  void assign(int64_t num, int64_t den);
};

// min(1, x) helper used when clamping union bounds.
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// (1 - p)^k etc. show up in amplification math; integer power with exact carry.
Rational pow(const Rational& base, int exponent);

}  // namespace ccwb
