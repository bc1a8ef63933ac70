#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace qcb {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p", "-p/q" or a plain decimal such as "0.25". Throws std::invalid_argument
// on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or "p" when the denominator is one.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

// Best rational approximation of x with denominator at most max_den
// (continued-fraction convergents plus the best semiconvergent).
Rational approximate(double x, std::int64_t max_den);

Rational pow_int(const Rational& base, int exponent);

}  // namespace qcb
