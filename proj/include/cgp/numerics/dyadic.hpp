#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cgp {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Exact dyadic rational numerator / 2^exponent.
///
/// Kept canonical: the numerator is odd unless the exponent is zero, and zero
/// is always 0/2^0. Addition, subtraction, multiplication and comparison are
/// exact, so equality of two values is decidable.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long long value) : num_(value) {}  // NOLINT(google-explicit-constructor)

  static Dyadic from_parts(BigInt numerator, std::uint64_t exponent) {
    Dyadic d;
    d.num_ = std::move(numerator);
    d.exp_ = exponent;
    d.canonicalize();
    return d;
  }

  /// 2^k for any integer k.
  static Dyadic pow2(long long k) {
    if (k >= 0) return from_parts(BigInt(1) << static_cast<unsigned>(k), 0);
    return from_parts(BigInt(1), static_cast<std::uint64_t>(-k));
  }

  /// Every finite double is a dyadic rational; the conversion is exact.
  static Dyadic from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("Dyadic::from_double: non-finite value");
    if (x == 0.0) return {};
    int e = 0;
    const double m = std::frexp(x, &e);  // x = m * 2^e, 0.5 <= |m| < 1
    const auto mant = static_cast<long long>(std::ldexp(m, 53));
    const long long shift = static_cast<long long>(e) - 53;
    Dyadic d;
    d.num_ = BigInt(mant);
    if (shift >= 0) {
      d.num_ <<= static_cast<unsigned>(shift);
    } else {
      d.exp_ = static_cast<std::uint64_t>(-shift);
    }
    d.canonicalize();
    return d;
  }

  /// Parses "num/2^exp" or a bare integer.
  static Dyadic parse(std::string_view text) {
    const auto slash = text.find("/2^");
    if (slash == std::string_view::npos) return from_parts(BigInt(std::string(text)), 0);
    BigInt num(std::string(text.substr(0, slash)));
    const auto exp = std::stoull(std::string(text.substr(slash + 3)));
    return from_parts(std::move(num), exp);
  }

  [[nodiscard]] const BigInt& numerator() const noexcept { return num_; }
  [[nodiscard]] std::uint64_t exponent() const noexcept { return exp_; }
  [[nodiscard]] bool is_zero() const noexcept { return num_.is_zero(); }
  [[nodiscard]] int sign() const noexcept { return num_.sign(); }

  [[nodiscard]] double to_double() const {
    if (num_.is_zero()) return 0.0;
    BigInt mag = boost::multiprecision::abs(num_);
    long long e = -static_cast<long long>(exp_);
    const auto bits = static_cast<long long>(boost::multiprecision::msb(mag)) + 1;
    if (bits > 64) {
      const auto drop = static_cast<unsigned>(bits - 64);
      mag >>= drop;
      e += drop;
    }
    const double v = std::ldexp(static_cast<double>(mag.convert_to<std::uint64_t>()),
                                static_cast<int>(std::clamp<long long>(e, -100000, 100000)));
    return num_.sign() < 0 ? -v : v;
  }

  [[nodiscard]] BigRational to_rational() const {
    return BigRational(num_, BigInt(1) << static_cast<unsigned>(exp_));
  }

  /// Rendered as "num/2^exp".
  [[nodiscard]] std::string str() const { return num_.str() + "/2^" + std::to_string(exp_); }

  Dyadic operator-() const {
    Dyadic d = *this;
    d.num_ = -d.num_;
    return d;
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.exp_ == b.exp_) return from_parts(a.num_ + b.num_, a.exp_);
    if (a.exp_ > b.exp_) return from_parts(a.num_ + (b.num_ << static_cast<unsigned>(a.exp_ - b.exp_)), a.exp_);
    return from_parts((a.num_ << static_cast<unsigned>(b.exp_ - a.exp_)) + b.num_, b.exp_);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return from_parts(a.num_ * b.num_, a.exp_ + b.exp_);
  }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) noexcept {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    const int s = (a - b).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  void canonicalize() {
    if (num_.is_zero()) {
      exp_ = 0;
      return;
    }
    if (exp_ == 0) return;
    const auto low = boost::multiprecision::lsb(boost::multiprecision::abs(num_));
    const auto shift = std::min<std::uint64_t>(low, exp_);
    if (shift == 0) return;
    const bool neg = num_.sign() < 0;
    BigInt mag = boost::multiprecision::abs(num_) >> static_cast<unsigned>(shift);
    num_ = neg ? BigInt(-mag) : mag;
    exp_ -= shift;
  }

  BigInt num_{0};
  std::uint64_t exp_{0};
};

/// base^n by repeated squaring, exact.
inline Dyadic pow(Dyadic base, std::uint64_t n) {
  Dyadic out(1);
  while (n > 0) {
    if (n & 1U) out = out * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return out;
}

}  // namespace cgp
