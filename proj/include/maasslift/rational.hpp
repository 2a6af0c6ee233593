#pragma once
// Exact rational arithmetic on top of GMP. All construction goes through
// make_rational so every value is canonicalized (mpq_class(n, d) is not).

#include <gmpxx.h>
#include <cstdint>
#include <string>

namespace ml {

using Int = mpz_class;
using Rational = mpq_class;
using i64 = std::int64_t;

Rational make_rational(const Int& num, const Int& den);
Rational make_rational(i64 num, i64 den = 1);

// Accepts "p" or "p/q" with optional leading '-'. Throws std::invalid_argument.
Rational parse_rational(const std::string& s);

// Canonical "p" or "p/q".
std::string to_string(const Rational& r);

double to_double(const Rational& r);

Int binomial(unsigned n, unsigned k);
Int int_pow(const Int& base, unsigned e);
Int int_pow(i64 base, unsigned e);

}  // namespace ml
