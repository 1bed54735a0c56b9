#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nilspace {

using Integer = mpz_class;
using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer floor_of(const Rational& q);
// Least non-negative residue of an integer-valued rational.
Integer mod_floor(const Rational& q, const Integer& m);
// q - floor(q), in [0,1).
Rational frac(const Rational& q);
bool is_integer(const Rational& q);

Integer factorial(unsigned n);
// binom(y, n) = y (y-1) ... (y-n+1) / n!, for any rational y.
Rational binomial(const Rational& y, unsigned n);
Integer binomial(const Integer& x, unsigned n);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

}  // namespace nilspace
