#include "enriched/rational.hpp"

#include <cctype>
#include <ostream>

#include "enriched/errors.hpp"

namespace enriched {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

cpp_int parse_integer(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw InputError("invalid rational literal '" + std::string(original) + "'");
  }
  cpp_int value{std::string(s)};
  return negative ? cpp_int(-value) : value;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw InputError("rational with zero denominator");
  // Boost rejects a negative denominator, so move the sign first.
  if (denominator < 0) {
    value_ = value_type(cpp_int(-cpp_int(numerator)), cpp_int(-cpp_int(denominator)));
  } else {
    value_ = value_type(cpp_int(numerator), cpp_int(denominator));
  }
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw InputError("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    cpp_int num = parse_integer(s.substr(0, slash), text);
    std::string_view den_text = s.substr(slash + 1);
    if (!all_digits(den_text)) {
      throw InputError("invalid rational literal '" + std::string(text) + "'");
    }
    cpp_int den(std::string{den_text});
    if (den == 0) throw InputError("rational with zero denominator '" + std::string(text) + "'");
    return Rational(value_type(num, den));
  }

  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw InputError("invalid rational literal '" + std::string(text) + "'");
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    cpp_int num(digits.empty() ? std::string("0") : digits);
    cpp_int den = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(frac_part.size()));
    if (negative) num = -num;
    return Rational(value_type(num, den));
  }

  return Rational(value_type(parse_integer(s, text)));
}

std::string Rational::to_string() const {
  const auto num = boost::multiprecision::numerator(value_);
  const auto den = boost::multiprecision::denominator(value_);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string Rational::numerator_string() const { return boost::multiprecision::numerator(value_).str(); }

std::string Rational::denominator_string() const {
  return boost::multiprecision::denominator(value_).str();
}

double Rational::to_double() const { return value_.convert_to<double>(); }

Rational Rational::abs() const { return value_.sign() < 0 ? -*this : *this; }

Rational& Rational::operator+=(const Rational& other) {
  value_ += other.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& other) {
  value_ -= other.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& other) {
  value_ *= other.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.is_zero()) throw InputError("division by zero");
  value_ /= other.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.to_string(); }

}  // namespace enriched
