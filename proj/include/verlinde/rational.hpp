#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace verlinde {

using Rational = mpq_class;
using Integer = mpz_class;

/// num/den in canonical form.
template <class Num, class Den>
Rational ratio(const Num& num, const Den& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p/q" or "p" (optional sign, decimal digits). Throws ParseError.
Rational parse_rational(std::string_view text);

/// Always "p/q" with q > 0, including integers ("3/1").
std::string format_rational(const Rational& q);

Integer factorial(unsigned k);
Integer binomial(unsigned n, unsigned k);

/// q^k for k >= 0.
Rational power(const Rational& q, unsigned k);

/// Coefficients of exp(a z) through z^degree.
std::vector<Rational> exp_series(const Rational& a, int degree);

}  // namespace verlinde
