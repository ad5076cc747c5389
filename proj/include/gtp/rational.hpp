#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace gtp {

// All arithmetic in this library is exact. Rationals are GMP-backed with
// arbitrary-precision integer parts; equality tests are always exact and
// there are no tolerances anywhere.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Parses "p", "-p" or "p/q" (q > 0 after normalization). The result is
/// always canonical: gcd(p, q) = 1, q >= 1. Throws InputError on anything
/// else, including non-canonical garbage such as "1/0".
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string format_rational(const Rational& value);

std::vector<std::string> format_rationals(const std::vector<Rational>& values);

}  // namespace gtp
