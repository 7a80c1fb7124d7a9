#include "wmaj/rational.hpp"

#include "wmaj/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace wmaj
{

namespace
{

bool all_digits( std::string_view s )
{
  if ( s.empty() )
  {
    return false;
  }
  for ( char c : s )
  {
    if ( !std::isdigit( static_cast<unsigned char>( c ) ) )
    {
      return false;
    }
  }
  return true;
}

integer parse_integer( std::string_view text, std::string_view whole )
{
  std::string_view digits = text;
  bool negative = false;
  if ( !digits.empty() && ( digits.front() == '-' || digits.front() == '+' ) )
  {
    negative = digits.front() == '-';
    digits.remove_prefix( 1 );
  }
  if ( !all_digits( digits ) )
  {
    throw error( errc::parse_error, "not a rational: '" + std::string( whole ) + "'" );
  }
  integer value( std::string( digits ), 10 );
  return negative ? integer( -value ) : value;
}

rational parse_decimal( std::string_view text )
{
  std::string_view rest = text;
  bool negative = false;
  if ( !rest.empty() && ( rest.front() == '-' || rest.front() == '+' ) )
  {
    negative = rest.front() == '-';
    rest.remove_prefix( 1 );
  }

  long exponent = 0;
  if ( auto e = rest.find_first_of( "eE" ); e != std::string_view::npos )
  {
    auto exp_text = rest.substr( e + 1 );
    if ( !exp_text.empty() && exp_text.front() == '+' )
    {
      exp_text.remove_prefix( 1 );
    }
    auto [ptr, ec] = std::from_chars( exp_text.data(), exp_text.data() + exp_text.size(), exponent );
    if ( ec != std::errc{} || ptr != exp_text.data() + exp_text.size() || exp_text.empty() )
    {
      throw error( errc::parse_error, "bad exponent in '" + std::string( text ) + "'" );
    }
    rest = rest.substr( 0, e );
  }

  std::string digits;
  auto dot = rest.find( '.' );
  auto int_part = rest.substr( 0, dot );
  auto frac_part = dot == std::string_view::npos ? std::string_view{} : rest.substr( dot + 1 );
  if ( ( int_part.empty() && frac_part.empty() ) ||
       ( !int_part.empty() && !all_digits( int_part ) ) ||
       ( !frac_part.empty() && !all_digits( frac_part ) ) )
  {
    throw error( errc::parse_error, "not a rational: '" + std::string( text ) + "'" );
  }
  digits.append( int_part );
  digits.append( frac_part );
  exponent -= static_cast<long>( frac_part.size() );

  rational value( integer( digits, 10 ) );
  integer scale;
  mpz_ui_pow_ui( scale.get_mpz_t(), 10u, static_cast<unsigned long>( std::labs( exponent ) ) );
  if ( exponent >= 0 )
  {
    value *= scale;
  }
  else
  {
    value /= scale;
  }
  value.canonicalize();
  return negative ? rational( -value ) : value;
}

} // namespace

rational parse_rational( std::string_view text )
{
  while ( !text.empty() && std::isspace( static_cast<unsigned char>( text.front() ) ) )
  {
    text.remove_prefix( 1 );
  }
  while ( !text.empty() && std::isspace( static_cast<unsigned char>( text.back() ) ) )
  {
    text.remove_suffix( 1 );
  }
  if ( text.empty() )
  {
    throw error( errc::parse_error, "empty rational" );
  }

  if ( auto slash = text.find( '/' ); slash != std::string_view::npos )
  {
    integer num = parse_integer( text.substr( 0, slash ), text );
    integer den = parse_integer( text.substr( slash + 1 ), text );
    if ( den == 0 )
    {
      throw error( errc::parse_error, "zero denominator in '" + std::string( text ) + "'" );
    }
    rational value( num, den );
    value.canonicalize();
    return value;
  }
  return parse_decimal( text );
}

std::string to_string( const rational& value )
{
  return value.get_str( 10 );
}

std::string to_decimal( const rational& value, int digits )
{
  // 12 significant digits only need double precision unless the magnitude
  // is outside double range, which never happens for probabilities.
  char buf[64];
  std::snprintf( buf, sizeof buf, "%.*g", digits, value.get_d() );
  return buf;
}

double to_double( const rational& value )
{
  return value.get_d();
}

rational from_double( double value )
{
  if ( !std::isfinite( value ) )
  {
    throw error( errc::invalid_input, "non-finite value" );
  }
  return rational( value );
}

rational pow( const rational& base, unsigned exponent )
{
  rational result;
  mpz_pow_ui( result.get_num_mpz_t(), base.get_num_mpz_t(), exponent );
  mpz_pow_ui( result.get_den_mpz_t(), base.get_den_mpz_t(), exponent );
  result.canonicalize();
  return result;
}

integer binomial( unsigned n, unsigned k )
{
  integer result;
  mpz_bin_uiui( result.get_mpz_t(), n, k );
  return result;
}

rational sum( const std::vector<rational>& values )
{
  rational total = 0;
  for ( const auto& v : values )
  {
    total += v;
  }
  return total;
}

} // namespace wmaj
