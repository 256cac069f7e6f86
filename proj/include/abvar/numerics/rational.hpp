#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace abvar {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" into a canonical rational. Throws ParseError.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text, or "p" when the denominator is one.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// max(|numerator|, denominator); the height used for candidate enumeration.
Integer height(const Rational& q);

Integer floor_div(const Integer& a, const Integer& b);
Integer round_nearest(const Rational& q);

/// Exact square root of a non-negative rational, if it exists.
bool rational_sqrt(const Rational& q, Rational& root);

/// Writes d = f^2 * s with s squarefree (sign kept on s). Primes above 2^20 are only removed when
/// the remaining cofactor is itself a perfect square.
void squarefree_decompose(const Integer& d, Integer& square_root_part, Integer& squarefree_part);

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

/// num/den in canonical form; den must be nonzero.
Rational make_rational(const Integer& num, const Integer& den);

}  // namespace abvar
