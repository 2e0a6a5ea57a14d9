#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace ssent {

using BigInt = mpz_class;

// Natural logarithm of a non-negative big integer; -inf for zero. Accurate to
// a few ulps of the result regardless of magnitude.
double log_of(const BigInt& x);

// log2 of a positive big integer (bit length plus mantissa).
double log2_of(const BigInt& x);

// Nearest double, or +inf when x exceeds the double range.
double to_double(const BigInt& x);

// floor(exp(log_x)). Exact whenever exp(log_x) < 2^52; above that the low
// bits are limited by the precision of log_x.
BigInt floor_exp(double log_x);

// ceil(exp(log_x)), same precision caveat as floor_exp.
BigInt ceil_exp(double log_x);

// floor(x / q) for q > 0, computed exactly for the binary value of q.
BigInt floor_div(const BigInt& x, double q);

// floor / ceil of a non-negative finite double as an exact big integer.
BigInt floor_of(double x);
BigInt ceil_of(double x);

BigInt pow_ui(std::uint64_t base, std::uint64_t exponent);

std::string to_decimal(const BigInt& x);

// Parses a non-negative decimal integer; throws InvalidArgument otherwise.
BigInt parse_decimal(std::string_view text);

}  // namespace ssent
