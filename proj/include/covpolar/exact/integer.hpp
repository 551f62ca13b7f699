#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace covpolar {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Thrown by SafeInt when a result leaves the int64 range.  Exact algorithms
// catch it and rerun on BigInt, so it never escapes the public API.
struct ExactOverflow {};

// int64 with overflow-checked arithmetic.  Used as the fast instantiation of
// the exact kernels; every operation either returns the exact result or throws.
class SafeInt {
 public:
  constexpr SafeInt() = default;
  constexpr SafeInt(std::int64_t v) : v_(v) {}  // NOLINT(implicit)

  constexpr std::int64_t value() const { return v_; }

  friend SafeInt operator+(SafeInt a, SafeInt b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw ExactOverflow{};
    return r;
  }
  friend SafeInt operator-(SafeInt a, SafeInt b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw ExactOverflow{};
    return r;
  }
  friend SafeInt operator*(SafeInt a, SafeInt b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw ExactOverflow{};
    return r;
  }
  // Truncating division, matching BigInt semantics.
  friend SafeInt operator/(SafeInt a, SafeInt b) {
    if (b.v_ == -1 && a.v_ == std::numeric_limits<std::int64_t>::min()) {
      throw ExactOverflow{};
    }
    return a.v_ / b.v_;
  }
  friend SafeInt operator%(SafeInt a, SafeInt b) {
    if (b.v_ == -1) return 0;
    return a.v_ % b.v_;
  }
  SafeInt operator-() const {
    if (v_ == std::numeric_limits<std::int64_t>::min()) throw ExactOverflow{};
    return -v_;
  }
  SafeInt& operator+=(SafeInt o) { return *this = *this + o; }
  SafeInt& operator-=(SafeInt o) { return *this = *this - o; }
  SafeInt& operator*=(SafeInt o) { return *this = *this * o; }
  SafeInt& operator/=(SafeInt o) { return *this = *this / o; }

  friend constexpr bool operator==(SafeInt, SafeInt) = default;
  friend constexpr auto operator<=>(SafeInt, SafeInt) = default;

 private:
  std::int64_t v_ = 0;
};

inline double to_double(SafeInt z) { return static_cast<double>(z.value()); }
inline double to_double(const BigInt& z) { return z.convert_to<double>(); }

inline SafeInt abs(SafeInt z) { return z < 0 ? -z : z; }
inline BigInt abs_value(const BigInt& z) { return boost::multiprecision::abs(z); }
inline SafeInt abs_value(SafeInt z) { return abs(z); }

inline int sign(SafeInt z) { return (z > 0) - (z < 0); }
inline int sign(const BigInt& z) { return z.sign(); }

inline BigInt to_big(SafeInt z) { return BigInt(z.value()); }
inline const BigInt& to_big(const BigInt& z) { return z; }

// Narrowing that reports failure by throwing ExactOverflow.
template <class Z>
Z from_big(const BigInt& z);

template <>
inline BigInt from_big<BigInt>(const BigInt& z) {
  return z;
}

template <>
inline SafeInt from_big<SafeInt>(const BigInt& z) {
  if (z > std::numeric_limits<std::int64_t>::max() ||
      z < std::numeric_limits<std::int64_t>::min()) {
    throw ExactOverflow{};
  }
  return SafeInt(z.convert_to<std::int64_t>());
}

template <class Z>
Z gcd(Z a, Z b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    Z t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Floor of a / b for b != 0.
template <class Z>
Z floor_div(const Z& a, const Z& b) {
  Z q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q = q - Z(1);
  return q;
}

// Nearest integer to a / b (ties toward +infinity), b > 0.
template <class Z>
Z round_div(const Z& a, const Z& b) {
  return floor_div(Z(2) * a + b, Z(2) * b);
}

// Extended gcd: returns g = gcd(a, b) >= 0 and sets x, y with a*x + b*y = g.
template <class Z>
Z extended_gcd(const Z& a, const Z& b, Z& x, Z& y) {
  Z old_r = a, r = b;
  Z old_s = 1, s = 0;
  Z old_t = 0, t = 1;
  while (r != 0) {
    Z q = old_r / r;
    Z tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

inline std::string to_string(const BigInt& z) { return z.str(); }

}  // namespace covpolar
