#include <wmaj/error.hpp>
#include <wmaj/rational.hpp>

#include <gtest/gtest.h>

using namespace wmaj;

TEST( rational, parses_fractions_integers_and_decimals )
{
  EXPECT_EQ( parse_rational( "6/8" ), rational( 3, 4 ) );
  EXPECT_EQ( parse_rational( "-2/4" ), rational( -1, 2 ) );
  EXPECT_EQ( parse_rational( "7" ), rational( 7 ) );
  EXPECT_EQ( parse_rational( "0.7" ), rational( 7, 10 ) );
  EXPECT_EQ( parse_rational( "1e-3" ), rational( 1, 1000 ) );
  EXPECT_EQ( parse_rational( "2.5E2" ), rational( 250 ) );
  EXPECT_EQ( parse_rational( "-.25" ), rational( -1, 4 ) );
}

TEST( rational, rejects_malformed_text )
{
  for ( const char* bad : { "", "1/0", "abc", "1/2/3", "0.5.1", "1e", "--1" } )
  {
    try
    {
      parse_rational( bad );
      ADD_FAILURE() << "accepted '" << bad << "'";
    }
    catch ( const error& e )
    {
      EXPECT_EQ( e.code(), errc::parse_error ) << bad;
    }
  }
}

TEST( rational, ratio_is_canonical )
{
  const auto r = ratio( 6, 8 );
  EXPECT_EQ( r.get_num(), 3 );
  EXPECT_EQ( r.get_den(), 4 );
  EXPECT_EQ( ratio( 25, 50 ), rational( 1, 2 ) );
}

TEST( rational, formatting )
{
  EXPECT_EQ( to_string( rational( 9, 5 ) ), "9/5" );
  EXPECT_EQ( to_string( rational( 4 ) ), "4" );
  EXPECT_EQ( to_decimal( rational( 1, 3 ) ), "0.333333333333" );
  EXPECT_EQ( to_decimal( rational( 19, 25 ) ), "0.76" );
}

TEST( rational, pow_binomial_sum )
{
  EXPECT_EQ( pow( rational( 2, 3 ), 3 ), rational( 8, 27 ) );
  EXPECT_EQ( pow( rational( 5 ), 0 ), rational( 1 ) );
  EXPECT_EQ( binomial( 10, 3 ), 120 );
  EXPECT_EQ( binomial( 3, 5 ), 0 );
  EXPECT_EQ( sum( { rational( 1, 2 ), rational( 1, 3 ), rational( 1, 6 ) } ), rational( 1 ) );
}

TEST( rational, from_double_is_exact )
{
  EXPECT_EQ( from_double( 0.5 ), rational( 1, 2 ) );
  EXPECT_EQ( to_double( from_double( 0.1 ) ), 0.1 );
  EXPECT_NE( from_double( 0.1 ), rational( 1, 10 ) );
}

TEST( error, message_carries_code_name )
{
  const error e( errc::verification_failed, "boom" );
  EXPECT_EQ( std::string( e.what() ), "VerificationFailed: boom" );
  EXPECT_EQ( to_string( errc::not_transitive ), "NotTransitive" );
}
