// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include "volcount/numeric.hpp"

#include <cctype>
#include <limits>

#include "volcount/errors.hpp"

namespace volcount {

namespace {

bool all_digits(std::string_view s) {
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) return std::nullopt;

  Rational result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (num.empty() || den.empty() || !all_digits(num) || !all_digits(den)) return std::nullopt;
    BigInt d{std::string(den)};
    if (d == 0) return std::nullopt;
    result = Rational(BigInt(std::string(num)), d);
  } else {
    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
    BigInt numerator(whole.empty() ? std::string("0") : std::string(whole));
    BigInt scale = 1;
    for (char c : frac) {
      numerator = numerator * 10 + (c - '0');
      scale *= 10;
    }
    result = Rational(numerator, scale);
  }
  return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1)
    return boost::multiprecision::numerator(value).str();
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

std::string to_string(const BigInt& value) { return value.str(); }

double to_double(const Rational& value) { return value.convert_to<double>(); }
double to_double(const BigInt& value) { return value.convert_to<double>(); }

BigInt floor_of(const Rational& value) {
  const BigInt& n = boost::multiprecision::numerator(value);
  const BigInt& d = boost::multiprecision::denominator(value);
  BigInt q = n / d;  // truncates toward zero
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

BigInt ceil_of(const Rational& value) {
  const BigInt& n = boost::multiprecision::numerator(value);
  const BigInt& d = boost::multiprecision::denominator(value);
  BigInt q = n / d;
  if (n % d != 0 && n > 0) q += 1;
  return q;
}

BigInt pow2(unsigned k) {
  BigInt r = 1;
  r <<= k;
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw NumericalError("integer overflow in lattice counter");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw NumericalError("integer overflow in lattice counter");
  return r;
}

std::int64_t to_int64(const BigInt& value) {
  if (value > std::numeric_limits<std::int64_t>::max() ||
      value < std::numeric_limits<std::int64_t>::min())
    throw NumericalError("coefficient does not fit in 64 bits");
  return value.convert_to<std::int64_t>();
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

}  // namespace volcount
