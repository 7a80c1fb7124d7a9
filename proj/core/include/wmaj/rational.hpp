#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wmaj
{

/*! Exact rational scalar. Always kept in canonical form (reduced, positive
    denominator, zero is 0/1) by GMP. */
using rational = mpq_class;
using integer = mpz_class;

/*! num/den in canonical form. GMP's two-argument constructor does not
    reduce, so every non-literal fraction goes through here. */
inline rational ratio( const integer& num, const integer& den )
{
  rational r( num, den );
  r.canonicalize();
  return r;
}

/*! \brief Parses "p/q", an integer, or a decimal such as "0.7" or "1e-3" exactly.

  Throws `error(errc::parse_error)` on malformed input or a zero denominator.
*/
rational parse_rational( std::string_view text );

/*! Canonical "p/q" text; integers print without a denominator. */
std::string to_string( const rational& value );

/*! Decimal rendering with `digits` significant digits. */
std::string to_decimal( const rational& value, int digits = 12 );

double to_double( const rational& value );

/*! Exact value of a finite double. */
rational from_double( double value );

/*! base^exponent for a non-negative exponent. */
rational pow( const rational& base, unsigned exponent );

/*! Binomial coefficient C(n, k) as an exact integer. */
integer binomial( unsigned n, unsigned k );

/*! Sum of a vector of rationals. */
rational sum( const std::vector<rational>& values );

} // namespace wmaj
