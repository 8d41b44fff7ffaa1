#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rfd {

// Normalized fraction over 64-bit integers (gcd-reduced, positive
// denominator). Intermediate products use 128 bits; a result that does not
// fit in 64 bits throws std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(wide(a.num_) * b.den_ + wide(b.num_) * a.den_, wide(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(wide(a.num_) * b.den_ - wide(b.num_) * a.den_, wide(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(wide(a.num_) * b.num_, wide(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) {
      throw std::domain_error("rational division by zero");
    }
    return make(wide(a.num_) * b.den_, wide(a.den_) * b.num_);
  }
  Rational operator-() const { return make(-wide(num_), den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const auto lhs = wide(a.num_) * b.den_;
    const auto rhs = wide(b.num_) * a.den_;
    return lhs < rhs ? std::strong_ordering::less
           : lhs > rhs ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    os << r.num_;
    if (r.den_ != 1) os << '/' << r.den_;
    return os;
  }

 private:
  using Wide = __int128;

  static Wide wide(std::int64_t v) { return static_cast<Wide>(v); }

  static Wide gcd_wide(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const Wide t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational make(Wide num, Wide den) {
    if (den == 0) {
      throw std::domain_error("rational with zero denominator");
    }
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const Wide g = gcd_wide(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    constexpr Wide lo = INT64_MIN;
    constexpr Wide hi = INT64_MAX;
    if (num < lo || num > hi || den > hi) {
      throw std::overflow_error("rational overflow");
    }
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void assign(std::int64_t num, std::int64_t den) { *this = make(num, den); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) {
    return std::to_string(r.numerator());
  }
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Accepts "p/q" or "p" with optional surrounding blanks.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    s = trim(s);
    if (s.empty()) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    std::size_t used = 0;
    std::int64_t value = 0;
    try {
      value = std::stoll(std::string(s), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    if (used != s.size()) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    return value;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_int(text));
  }
  const std::int64_t num = parse_int(text.substr(0, slash));
  const std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) {
    throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

}  // namespace rfd
