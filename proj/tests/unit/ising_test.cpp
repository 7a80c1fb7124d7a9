#include <wmaj/error.hpp>
#include <wmaj/ising.hpp>
#include <wmaj/measure.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wmaj;
using namespace wmaj::ising;

namespace
{

rational r( long a, long b )
{
  return ratio( a, b );
}

tree_params tp_of( int depth, const rational& eps, const rational& delta )
{
  tree_params tp;
  tp.depth = depth;
  tp.eps = eps;
  tp.delta = delta;
  return tp;
}

rational mu_m_oracle( int depth, const rational& eps, const rational& delta )
{
  rational out = 0;
  oracle::enumerate_tree( depth, eps, delta, [&]( int, const auto&, const auto& votes, const rational& m ) {
    if ( oracle::recursive_majority_votes( votes ) )
    {
      out += m;
    }
  } );
  return out;
}

template<class F>
errc code_of( F&& f )
{
  try
  {
    f();
  }
  catch ( const error& e )
  {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return errc::invalid_input;
}

} // namespace

TEST( ising, symmetric_without_resampling )
{
  for ( int depth = 1; depth <= 6; ++depth )
  {
    const auto res = bp_exact( tp_of( depth, r( 3, 20 ), 0 ) );
    EXPECT_EQ( res.mu_m, r( 1, 2 ) );
    EXPECT_TRUE( res.exact );
    for ( int k = 0; k <= depth; ++k )
    {
      EXPECT_EQ( res.state.a[k] + res.state.b[k], 1 );
    }
  }
}

TEST( ising, noiseless_one_level )
{
  EXPECT_EQ( bp_exact( tp_of( 1, 0, r( 1, 5 ) ) ).mu_m, r( 69, 125 ) );
  const auto s = bp_exact( tp_of( 3, r( 1, 100 ), r( 1, 100 ) ) ).state;
  EXPECT_EQ( s.a[0], r( 99, 100 ) );
  EXPECT_EQ( s.b[0], 0 );
}

TEST( ising, recursion_matches_enumeration )
{
  for ( int depth : { 1, 2 } )
  {
    for ( const auto& eps : { rational( 0 ), r( 1, 100 ), r( 1, 10 ), r( 1, 3 ) } )
    {
      for ( const auto& delta : { rational( 0 ), r( 1, 100 ), r( 1, 5 ) } )
      {
        EXPECT_EQ( bp_exact( tp_of( depth, eps, delta ) ).mu_m, mu_m_oracle( depth, eps, delta ) )
            << depth << " " << eps << " " << delta;
      }
    }
  }
}

TEST( ising, leaf_measure_matches_enumeration )
{
  const auto tp = tp_of( 2, r( 1, 10 ), r( 1, 20 ) );
  std::map<std::uint64_t, rational> ref;
  oracle::enumerate_tree( 2, tp.eps, tp.delta, [&]( int, const auto&, const auto& votes, const rational& m ) {
    ref[index_of( votes )] += m;
  } );
  const auto got = leaf_measure( tp );
  EXPECT_EQ( got.n, 9 );
  EXPECT_EQ( got.mass, ref );
  EXPECT_EQ( code_of( [] { leaf_measure( tp_of( 3, 0, 0 ) ); } ), errc::too_large );
}

TEST( ising, leaf_measure_satisfies_fkg_at_one_level )
{
  const auto m = leaf_measure( tp_of( 1, r( 1, 10 ), 0 ) );
  EXPECT_TRUE( is_fkg( measure::explicit_masses( m.n, m.mass ) ) );
}

TEST( ising, resampling_raises_the_outcome )
{
  for ( int depth = 1; depth <= 5; ++depth )
  {
    rational prev = 0;
    for ( int d = 0; d <= 10; ++d )
    {
      const auto v = bp_exact( tp_of( depth, r( 1, 20 ), r( d, 20 ) ) ).mu_m;
      EXPECT_GE( v, prev );
      prev = v;
    }
  }
}

TEST( ising, ceiling_margin_report )
{
  const auto z = claim1_margin( tp_of( 3, 0, 0 ) );
  EXPECT_EQ( z.h, 1 );
  EXPECT_TRUE( z.h_at_least_one );
  const auto c = claim1_margin( tp_of( 8, r( 1, 100 ), r( 1, 100 ) ) );
  EXPECT_TRUE( c.h_at_least_one );
  EXPECT_TRUE( c.conditional_ok );
  EXPECT_TRUE( c.ceiling_ok );
  EXPECT_EQ( c.ceiling, r( 101, 200 ) );
  EXPECT_LE( c.mu_m, c.ceiling );
  EXPECT_EQ( c.root0_majority0.size(), 9u );
  EXPECT_EQ( code_of( [] { claim1_margin( tp_of( 2, r( 1, 20 ), r( 1, 20 ) ) ); } ), errc::out_of_regime );
  EXPECT_EQ( code_of( [] { claim1_margin( tp_of( 2, r( 1, 100 ), r( 1, 200 ) ) ); } ), errc::out_of_regime );
}

TEST( ising, parameter_validation )
{
  EXPECT_EQ( code_of( [] { bp_exact( tp_of( 0, 0, 0 ) ); } ), errc::invalid_params );
  EXPECT_EQ( code_of( [] { bp_exact( tp_of( 2, r( 1, 2 ), 0 ) ); } ), errc::invalid_params );
  EXPECT_EQ( code_of( [] { bp_exact( tp_of( 2, 0, 1 ) ); } ), errc::invalid_params );
  EXPECT_EQ( code_of( [] { mc_mu_m( tp_of( 2, 0, 0 ), 0, 1 ); } ), errc::invalid_params );
  EXPECT_EQ( code_of( [] { mc_effect( tp_of( 1, 0, 0 ), 3, 10, 1 ); } ), errc::index_out_of_range );
}

TEST( ising, deep_trees_fall_back_to_bounded_rounding )
{
  const auto res = bp_exact( tp_of( 14, r( 1, 100 ), r( 1, 100 ) ) );
  EXPECT_FALSE( res.exact );
  EXPECT_GT( res.error_bound, 0.0 );
  EXPECT_LT( res.error_bound, 1e-40 );
  EXPECT_LE( to_double( res.mu_m ), 0.505 + res.error_bound );
}

TEST( ising, effect_decay_bounds )
{
  const auto one = claim2_bound( 1, 0.3 );
  EXPECT_DOUBLE_EQ( one.stated, 2.0 );
  EXPECT_DOUBLE_EQ( one.proof_form, 2.0 );
  const auto nine = claim2_bound( 9, 0.01 );
  EXPECT_NEAR( nine.stated, std::pow( 0.995, 4 ) + 0.0625, 1e-15 );
  EXPECT_NEAR( nine.proof_form, std::pow( 0.98, 4 ) + 0.0625, 1e-15 );
  for ( int depth = 1; depth <= 15; ++depth )
  {
    for ( double eps : { 0.001, 0.01, 0.1, 0.3, 0.49 } )
    {
      const auto b = claim2_bound( depth, eps );
      EXPECT_LE( b.proof_form, b.stated );
    }
  }
}

TEST( ising, monte_carlo_is_deterministic )
{
  const auto tp = tp_of( 3, r( 1, 10 ), r( 1, 10 ) );
  mc_options one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = mc_mu_m( tp, 20000, 99, one );
  const auto b = mc_mu_m( tp, 20000, 99, many );
  EXPECT_EQ( a.estimate, b.estimate );
  EXPECT_EQ( a.std_error, b.std_error );
  EXPECT_EQ( a.samples, 20000u );
  EXPECT_NE( a.estimate, mc_mu_m( tp, 20000, 100, one ).estimate );
  const auto e1 = mc_effect( tp, 5, 20000, 7, one );
  const auto e2 = mc_effect( tp, 5, 20000, 7, many );
  EXPECT_EQ( e1.vote_conditioned.estimate, e2.vote_conditioned.estimate );
  EXPECT_EQ( e1.spin_conditioned.estimate, e2.spin_conditioned.estimate );
}

TEST( ising, monte_carlo_agrees_with_recursion )
{
  for ( int depth : { 1, 2, 4 } )
  {
    const auto tp = tp_of( depth, r( 1, 10 ), r( 1, 10 ) );
    const auto est = mc_mu_m( tp, 100000, 1000 + depth );
    EXPECT_NEAR( est.estimate, to_double( bp_exact( tp ).mu_m ), 4 * est.std_error );
  }
  const auto flat = mc_mu_m( tp_of( 3, r( 1, 10 ), 0 ), 100000, 5 );
  EXPECT_NEAR( flat.estimate, 0.5, 4 * flat.std_error );
}

TEST( ising, one_level_effect_matches_enumeration )
{
  const rational eps = r( 1, 10 );
  // E[m | x_1 = b] from the 16-case joint law of root and leaves
  rational on = 0, on_m = 0, off = 0, off_m = 0;
  oracle::enumerate_tree( 1, eps, 0, [&]( int, const auto&, const auto& votes, const rational& m ) {
    const bool maj = oracle::recursive_majority_votes( votes );
    if ( votes[0] )
    {
      on += m;
      on_m += maj ? m : rational( 0 );
    }
    else
    {
      off += m;
      off_m += maj ? m : rational( 0 );
    }
  } );
  const double exact = to_double( on_m / on - off_m / off );
  const auto est = mc_effect( tp_of( 1, eps, 0 ), 0, 100000, 11 );
  EXPECT_NEAR( est.vote_conditioned.estimate, exact, 4 * est.vote_conditioned.std_error );
  // without resampling the vote is the spin
  EXPECT_EQ( est.vote_conditioned.estimate, est.spin_conditioned.estimate );
}

TEST( ising, leaves_are_exchangeable )
{
  const auto tp = tp_of( 3, r( 1, 20 ), r( 1, 20 ) );
  const auto a = mc_effect( tp, 0, 50000, 21 );
  const auto b = mc_effect( tp, 17, 50000, 22 );
  const double joint = std::hypot( a.vote_conditioned.std_error, b.vote_conditioned.std_error );
  EXPECT_NEAR( a.vote_conditioned.estimate, b.vote_conditioned.estimate, 4 * joint );
  const double joint_y = std::hypot( a.spin_conditioned.std_error, b.spin_conditioned.std_error );
  EXPECT_NEAR( a.spin_conditioned.estimate, b.spin_conditioned.estimate, 4 * joint_y );
}

TEST( ising, empty_stratum )
{
  EXPECT_EQ( code_of( [] { mc_effect( tp_of( 2, r( 1, 10 ), r( 1, 10 ) ), 0, 1, 3 ); } ), errc::degenerate_stratum );
}

TEST( ising, sampler_votes_follow_spins )
{
  tree_sampler s( tp_of( 2, r( 1, 10 ), 0 ) );
  rng g( 5 );
  std::vector<std::uint8_t> spins( 9 ), votes( 9 );
  for ( int t = 0; t < 1000; ++t )
  {
    s.draw( g, spins, votes );
    EXPECT_EQ( spins, votes );
  }
  tree_sampler all( tp_of( 2, r( 1, 10 ), r( 999999, 1000000 ) ) );
  std::size_t ones = 0;
  for ( int t = 0; t < 1000; ++t )
  {
    all.draw( g, spins, votes );
    ones += std::count( votes.begin(), votes.end(), 1 );
  }
  EXPECT_GT( ones, 8980u );
}
