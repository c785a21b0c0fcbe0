// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace volcount {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses an exact rational literal: integers ("-12"), decimals ("0.25",
/// ".5", "3."), and fractions ("7/3"). Returns nullopt on anything else.
std::optional<Rational> parse_rational(std::string_view text);

/// Shortest exact rendering: "3", "-1/2".
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

double to_double(const Rational& value);
double to_double(const BigInt& value);

BigInt floor_of(const Rational& value);
BigInt ceil_of(const Rational& value);

/// 2^k as a big integer.
BigInt pow2(unsigned k);

/// Checked int64 arithmetic for the integer counter; throws NumericalError
/// on overflow.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t to_int64(const BigInt& value);

/// Floor and ceiling of a / b for b != 0.
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);

}  // namespace volcount
