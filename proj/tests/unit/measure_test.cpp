#include <wmaj/error.hpp>
#include <wmaj/measure.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace wmaj;

namespace
{

bitvec bits( std::string_view s )
{
  return parse_bitstring( s );
}

rational total_mass( const measure& mu )
{
  rational t = 0;
  for_each_atom( mu, [&]( std::uint64_t, const rational& m ) { t += m; } );
  return t;
}

} // namespace

TEST( measure, point_masses )
{
  const auto u = measure::uniform_product( 3, rational( 1, 2 ) );
  EXPECT_EQ( prob_of( u, bits( "101" ) ), rational( 1, 8 ) );
  const auto a = measure::all_same( 3, rational( 7, 10 ) );
  EXPECT_EQ( prob_of( a, bits( "111" ) ), rational( 7, 10 ) );
  EXPECT_EQ( prob_of( a, bits( "000" ) ), rational( 3, 10 ) );
  EXPECT_EQ( prob_of( a, bits( "101" ) ), 0 );
  EXPECT_EQ( prob_of( measure::tmixture( 1, 0 ), bits( "1" ) ), rational( 1, 2 ) );
}

TEST( measure, masses_sum_to_one )
{
  EXPECT_EQ( total_mass( measure::product( { rational( 1, 3 ), rational( 3, 4 ), rational( 1, 5 ) } ) ), 1 );
  EXPECT_EQ( total_mass( measure::tmixture( 7, rational( 1, 10 ) ) ), 1 );
  EXPECT_EQ( total_mass( measure::all_same( 4, rational( 1, 3 ) ) ), 1 );
  EXPECT_EQ( total_mass( measure::tmixture( 5, 0 ) ), 1 );
}

TEST( measure, marginals )
{
  EXPECT_EQ( marginal( measure::tmixture( 10, rational( 1, 5 ) ), 3 ), rational( 3, 5 ) );
  EXPECT_EQ( marginal( measure::ising_leaves( 3, rational( 1, 100 ), rational( 1, 100 ) ), 4 ), rational( 101, 200 ) );
  EXPECT_EQ( marginal( measure::product( { rational( 3, 10 ), rational( 9, 10 ) } ), 1 ), rational( 9, 10 ) );
  EXPECT_THROW( marginal( measure::uniform_product( 2, rational( 1, 2 ) ), 2 ), error );
}

TEST( measure, expectations )
{
  const auto maj = bool_fn::majority( 3 );
  EXPECT_EQ( expect( measure::uniform_product( 3, rational( 1, 2 ) ), maj ), rational( 1, 2 ) );
  EXPECT_EQ( expect( measure::all_same( 3, rational( 7, 10 ) ), maj ), rational( 7, 10 ) );
  EXPECT_EQ( expect( measure::uniform_product( 3, rational( 3, 5 ) ), maj ), ratio( 648, 1000 ) );
}

TEST( measure, product_expectation_matches_polynomial )
{
  std::mt19937_64 g( 3 );
  for ( int t = 0; t < 30; ++t )
  {
    const int n = 1 + static_cast<int>( g() % 6 );
    std::vector<rational> p;
    for ( int i = 0; i < n; ++i )
    {
      p.push_back( ratio( 1 + static_cast<long>( g() % 9 ), 10 ) );
    }
    std::vector<bool> table( std::size_t( 1 ) << n );
    for ( auto&& b : table )
    {
      b = g() & 1;
    }
    const auto f = bool_fn::truth_table( n, table );
    rational direct = 0;
    for ( std::uint64_t x = 0; x < table.size(); ++x )
    {
      if ( !table[x] )
      {
        continue;
      }
      rational term = 1;
      const auto pt = oracle::bits_msb_first( x, n );
      for ( int i = 0; i < n; ++i )
      {
        term *= pt[i] ? p[i] : 1 - p[i];
      }
      direct += term;
    }
    EXPECT_EQ( expect( measure::product( p ), f ), direct );
  }
}

TEST( measure, tmixture_atoms_match_incomplete_beta )
{
  for ( int n : { 1, 2, 5, 9 } )
  {
    for ( const auto& eps : { rational( 0 ), rational( 1, 10 ), rational( 1, 4 ), rational( 2, 3 ) } )
    {
      for ( int k = 0; k <= n; ++k )
      {
        EXPECT_EQ( tmixture_atom( n, k, eps ), oracle::tmixture_atom_beta( n, k, eps ) ) << n << " " << k << " " << eps;
      }
    }
  }
}

TEST( measure, tmixture_win_probability )
{
  EXPECT_EQ( tmixture_win_prob( 1, 0 ), rational( 1, 2 ) );
  const rational eps( 1, 10 );
  const auto v = tmixture_win_prob( 3, eps );
  EXPECT_LT( v, 1 / ( 2 * ( 1 - eps ) ) );
  // oracle: sum over winning Hamming weights of C(n,k) times the beta atom
  rational ref = 0;
  for ( int k = 2; k <= 3; ++k )
  {
    ref += rational( binomial( 3, k ) ) * oracle::tmixture_atom_beta( 3, k, eps );
  }
  EXPECT_EQ( v, ref );
  EXPECT_EQ( v, expect( measure::tmixture( 3, eps ), bool_fn::majority( 3 ) ) );
  for ( int n = 1; n <= 15; n += 2 )
  {
    rational prev = -1;
    for ( int e = 0; e < 10; ++e )
    {
      const auto w = tmixture_win_prob( n, ratio( e, 10 ) );
      EXPECT_GE( w, prev );
      prev = w;
    }
  }
  EXPECT_THROW( tmixture_win_prob( 4, eps ), error );
}

TEST( measure, fkg_lattice_condition )
{
  EXPECT_TRUE( is_fkg( measure::product( { rational( 1, 3 ), rational( 1, 2 ), rational( 4, 5 ) } ) ) );
  EXPECT_TRUE( is_fkg( measure::all_same( 3, rational( 1, 2 ) ) ) );
  EXPECT_TRUE( is_fkg( measure::explicit_masses( 3, to_explicit( measure::all_same( 3, rational( 1, 2 ) ) ).mass ) ) );
  EXPECT_FALSE( is_fkg( measure::explicit_masses( 2, { { 2, rational( 1, 2 ) }, { 1, rational( 1, 2 ) } } ) ) );
  EXPECT_TRUE( is_fkg( measure::tmixture( 4, rational( 1, 5 ) ) ) );
}

TEST( measure, validation )
{
  EXPECT_THROW( measure::product( { rational( 1 ) } ), error );
  EXPECT_THROW( measure::product( { rational( 0 ) } ), error );
  EXPECT_THROW( measure::explicit_masses( 2, { { 0, rational( 1, 2 ) } } ), error );
  EXPECT_THROW( measure::explicit_masses( 2, { { 7, rational( 1 ) } } ), error );
  EXPECT_THROW( measure::tmixture( 3, 1 ), error );
  EXPECT_THROW( measure::all_same( 3, rational( 3, 2 ) ), error );
  EXPECT_THROW( measure::ising_leaves( 2, rational( 1, 2 ), 0 ), error );
  EXPECT_THROW( prob_of( measure::ising_leaves( 1, rational( 1, 10 ), 0 ), bits( "101" ) ), error );
  EXPECT_THROW( prob_of( measure::all_same( 3, rational( 1, 2 ) ), bits( "10" ) ), error );
}

TEST( measure, explicit_drops_zero_masses )
{
  const auto mu = measure::explicit_masses( 2, { { 0, rational( 0 ) }, { 3, rational( 1 ) } } );
  EXPECT_EQ( std::get<explicit_measure>( mu.representation() ).mass.size(), 1u );
}

TEST( measure, sampling_is_seeded_and_calibrated )
{
  const auto same = measure::all_same( 5, rational( 1, 2 ) );
  for ( const auto& x : sample( same, 5, 1000 ) )
  {
    const int s = oracle::popcount_of( x );
    EXPECT_TRUE( s == 0 || s == 5 );
  }
  const auto mu = measure::product( { rational( 19, 20 ), rational( 1, 5 ) } );
  const auto a = sample( mu, 42, 100000 );
  EXPECT_EQ( a, sample( mu, 42, 100000 ) );
  EXPECT_NE( a, sample( mu, 43, 100000 ) );
  for ( int k = 0; k < 2; ++k )
  {
    double hits = 0;
    for ( const auto& x : a )
    {
      hits += x[k];
    }
    const double p = to_double( marginal( mu, k ) );
    const double sd = std::sqrt( p * ( 1 - p ) / 1e5 );
    EXPECT_NEAR( hits / 1e5, p, 4 * sd );
  }
  const auto t = measure::tmixture( 4, rational( 1, 5 ) );
  double ones = 0;
  for ( const auto& x : sample( t, 9, 100000 ) )
  {
    ones += x[2];
  }
  EXPECT_NEAR( ones / 1e5, 0.6, 4 * std::sqrt( 0.24 / 1e5 ) );

  const auto ex = measure::explicit_masses( 2, { { 1, rational( 1, 4 ) }, { 2, rational( 3, 4 ) } } );
  double first = 0;
  for ( const auto& x : sample( ex, 1, 100000 ) )
  {
    EXPECT_NE( x[0], x[1] );
    first += x[0];
  }
  EXPECT_NEAR( first / 1e5, 0.75, 4 * std::sqrt( 0.1875 / 1e5 ) );
}

TEST( measure, ising_leaf_sampling_decorrelates_at_high_noise )
{
  const auto mu = measure::ising_leaves( 2, rational( 49, 100 ), 0 );
  const auto draws = sample( mu, 123, 100000 );
  // leaves 0 and 8 share only the root: correlation theta^4 = 0.02^4
  double s0 = 0, s8 = 0, s08 = 0;
  for ( const auto& x : draws )
  {
    s0 += x[0];
    s8 += x[8];
    s08 += x[0] * x[8];
  }
  const double cov = s08 / 1e5 - ( s0 / 1e5 ) * ( s8 / 1e5 );
  EXPECT_NEAR( cov, 0.0, 4 * 0.25 / std::sqrt( 1e5 ) );
}
