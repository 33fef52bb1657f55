#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace photonic {

/// Exact rational used for every cost quantity. Costs are summed in a
/// different order by the DP, the exhaustive search and the breakdown
/// evaluator, so they must compare equal without any tolerance.
using Rational = mpq_class;

/// Parses a decimal literal such as "100", "0.1", "-2.5e-3" into the exact
/// rational it denotes (0.1 becomes 1/10, not the nearest double).
Rational parse_decimal(std::string_view text);

/// Exact rational for the shortest decimal that round-trips `value`.
/// JSON numbers arrive as doubles; this recovers what the user typed.
Rational from_decimal_double(double value);

/// Exact binary value of a double (0.1 becomes 3602879701896397/2^55).
Rational from_exact_double(double value);

Rational from_u64(std::uint64_t value);

double to_double(const Rational& value);

/// Fixed-point rendering with `digits` fractional digits, rounded half to
/// even. Only used at reporting boundaries.
std::string format_fixed(const Rational& value, int digits = 3);

/// Round-half-even to `digits` fractional digits, kept as a rational.
Rational round_half_even(const Rational& value, int digits);

/// `num/den` in lowest terms.
std::string to_fraction_string(const Rational& value);

}  // namespace photonic
