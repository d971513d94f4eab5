#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qhelly {

/// Exact rational number. Every count, bound, volume and threshold in the
/// library is carried as a Rational; no floating point enters a membership
/// decision.
using Rational = mpq_class;
using Integer = mpz_class;

/// Thrown for malformed input: out-of-range vertices, bad windows, parse
/// failures, violated operation preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an operation is asked to do something its backend cannot,
/// e.g. an exact nerve test on a Monte Carlo body.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p/q", "p" or a terminating decimal such as "0.25".
Rational parse_rational(std::string_view text);

/// Always "p/q" with q >= 1, e.g. "1/9216", "3/1", "0/1".
std::string to_string(const Rational& value);

/// C(n, k) as an exact integer; 0 when k < 0 or k > n, and 0 for n < 0.
Integer binomial(std::int64_t n, std::int64_t k);

/// num / den in lowest terms; den must be nonzero.
Rational ratio(const Integer& num, const Integer& den);

/// Floor of a rational, as a signed 64-bit value.
std::int64_t floor_to_int(const Rational& value);

/// Ceiling of a rational, as a signed 64-bit value.
std::int64_t ceil_to_int(const Rational& value);

Rational pow(const Rational& base, unsigned exponent);

/// base^exponent for any integer exponent; base must be nonzero when
/// exponent < 0.
Rational ipow(const Rational& base, std::int64_t exponent);

}  // namespace qhelly
