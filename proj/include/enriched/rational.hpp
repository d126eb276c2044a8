#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace enriched {

// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
 public:
  using value_type = boost::multiprecision::cpp_rational;

  Rational() = default;
  Rational(std::int64_t value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t numerator, std::int64_t denominator);
  explicit Rational(value_type value) : value_(std::move(value)) {}

  // Accepts integers ("3", "-4"), fractions ("1/2", "-3/4") and finite
  // decimals ("0.5", "-1.25", "2e-1" is not accepted).
  static Rational parse(std::string_view text);

  std::string to_string() const;
  std::string numerator_string() const;
  std::string denominator_string() const;
  double to_double() const;

  bool is_zero() const { return value_.is_zero(); }
  int sign() const { return value_.sign(); }
  Rational abs() const;

  const value_type& raw() const { return value_; }

  Rational& operator+=(const Rational& other);
  Rational& operator-=(const Rational& other);
  Rational& operator*=(const Rational& other);
  Rational& operator/=(const Rational& other);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(value_type(-value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  value_type value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace enriched
