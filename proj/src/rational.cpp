#include "ccwb/rational.hpp"

#include <limits>

namespace ccwb {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational Rational::from_i128(__int128 num, __int128 den) {
  if (den == 0) throw parameter_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr __int128 lo = std::numeric_limits<int64_t>::min();
  constexpr __int128 hi = std::numeric_limits<int64_t>::max();
  if (num < lo || num > hi || den > hi) throw std::overflow_error("Rational: value exceeds 64-bit storage");
  Rational r;
  r.num_ = static_cast<int64_t>(num);
  r.den_ = static_cast<int64_t>(den);
  return r;
}

void Rational::assign(int64_t num, int64_t den) {
  *this = from_i128(num, den);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational pow(const Rational& base, int exponent) {
  if (exponent < 0) throw parameter_error("Rational pow: negative exponent");
  Rational acc(1);
  Rational cur = base;
  int e = exponent;
  while (e > 0) {
    if (e & 1) acc = acc * cur;
    e >>= 1;
    if (e > 0) cur = cur * cur;
  }
  return acc;
}

}  // namespace ccwb
