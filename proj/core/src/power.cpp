#include "wmaj/power.hpp"

#include "wmaj/error.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace wmaj
{

namespace
{

/* First and mixed moments of (f, X_1..X_n) collected in one pass. */
struct moments
{
  rational mean_f;
  std::vector<rational> mean_x;   // mu[X_k]
  std::vector<rational> mean_fx;  // mu[f X_k]
  std::vector<rational> pivotal;  // mu{k pivotal}
};

moments collect( const bool_fn& f, const measure& mu, int cap )
{
  if ( f.arity() != mu.arity() )
  {
    throw error( errc::length_mismatch, "function has " + std::to_string( f.arity() ) + " variables, measure has " +
                                            std::to_string( mu.arity() ) );
  }
  if ( !is_enumerable( mu ) )
  {
    throw error( errc::unsupported, "power quantities need an enumerable measure; use the ising estimators" );
  }
  const int n = f.arity();
  const auto table = to_truth_table( f, cap );
  const auto& bits = truth_bits( table );

  moments m;
  m.mean_f = 0;
  m.mean_x.assign( n, 0 );
  m.mean_fx.assign( n, 0 );
  m.pivotal.assign( n, 0 );
  for_each_atom(
      mu,
      [&]( std::uint64_t x, const rational& mass ) {
        const bool fx = bits[x];
        if ( fx )
        {
          m.mean_f += mass;
        }
        for ( int k = 0; k < n; ++k )
        {
          const auto mask = flip_mask( n, k );
          if ( x & mask )
          {
            m.mean_x[k] += mass;
            if ( fx )
            {
              m.mean_fx[k] += mass;
            }
          }
          if ( fx != bits[x ^ mask] )
          {
            m.pivotal[k] += mass;
          }
        }
      },
      cap );
  return m;
}

void check_index( const bool_fn& f, int k )
{
  if ( k < 0 || k >= f.arity() )
  {
    throw error( errc::index_out_of_range, "variable index " + std::to_string( k ) + " for arity " +
                                               std::to_string( f.arity() ) );
  }
}

bool degenerate( const rational& p )
{
  return sgn( p ) == 0 || p == 1;
}

rational effect_from( const moments& m, int k )
{
  const auto& p = m.mean_x[k];
  if ( degenerate( p ) )
  {
    throw error( errc::degenerate_marginal, "effect of variable " + std::to_string( k + 1 ) +
                                                " is undefined: P(X_k = 1) = " + to_string( p ) );
  }
  return m.mean_fx[k] / p - ( m.mean_f - m.mean_fx[k] ) / ( 1 - p );
}

rational factorial( int n )
{
  integer r = 1;
  for ( int i = 2; i <= n; ++i )
  {
    r *= i;
  }
  return rational( r );
}

} // namespace

rational influence( const bool_fn& f, const measure& mu, int k, int cap )
{
  check_index( f, k );
  return collect( f, mu, cap ).pivotal[k];
}

rational effect( const bool_fn& f, const measure& mu, int k, int cap )
{
  check_index( f, k );
  return effect_from( collect( f, mu, cap ), k );
}

rational covariance( const bool_fn& f, const measure& mu, int k, int cap )
{
  check_index( f, k );
  const auto m = collect( f, mu, cap );
  if ( degenerate( m.mean_x[k] ) )
  {
    throw error( errc::degenerate_marginal, "covariance with a constant coordinate " + std::to_string( k + 1 ) );
  }
  return m.mean_fx[k] - m.mean_f * m.mean_x[k];
}

std::vector<rational> banzhaf( const bool_fn& f, int cap )
{
  return collect( f, measure::uniform_product( f.arity(), rational( 1, 2 ) ), cap ).pivotal;
}

std::vector<rational> shapley_shubik( const bool_fn& f, int cap )
{
  const int n = f.arity();
  const auto table = to_truth_table( f, cap );
  const auto& bits = truth_bits( table );

  // integral_0^1 p^j (1-p)^(n-1-j) dp = j! (n-1-j)! / n!
  std::vector<rational> beta( n );
  const rational total = factorial( n );
  for ( int j = 0; j < n; ++j )
  {
    beta[j] = factorial( j ) * factorial( n - 1 - j ) / total;
  }

  std::vector<rational> index( n );
  std::vector<std::uint64_t> counts( n );
  for ( int k = 0; k < n; ++k )
  {
    std::fill( counts.begin(), counts.end(), 0 );
    const auto mask = flip_mask( n, k );
    for ( std::uint64_t x = 0; x < bits.size(); ++x )
    {
      if ( !( x & mask ) && bits[x] != bits[x | mask] )
      {
        ++counts[std::popcount( x )];
      }
    }
    rational s = 0;
    for ( int j = 0; j < n; ++j )
    {
      if ( counts[j] )
      {
        s += beta[j] * counts[j];
      }
    }
    index[k] = s;
  }
  return index;
}

std::vector<rational> shapley_shubik_orders( const bool_fn& f )
{
  const int n = f.arity();
  if ( n > 10 )
  {
    throw error( errc::too_large, "order enumeration is limited to 10 voters" );
  }
  const auto table = to_truth_table( f );
  const auto& bits = truth_bits( table );
  std::vector<int> order( n );
  std::iota( order.begin(), order.end(), 0 );
  std::vector<std::uint64_t> credit( n, 0 );
  std::uint64_t orders = 0;
  do
  {
    ++orders;
    std::uint64_t coalition = 0;
    bool value = bits[0];
    for ( int v : order )
    {
      coalition |= flip_mask( n, v );
      const bool next = bits[coalition];
      if ( next != value )
      {
        ++credit[v];
      }
      value = next;
    }
  } while ( std::next_permutation( order.begin(), order.end() ) );

  std::vector<rational> index( n );
  for ( int k = 0; k < n; ++k )
  {
    index[k] = rational( credit[k] ) / rational( orders );
  }
  return index;
}

power_report make_power_report( const bool_fn& f, const measure& mu, const power_options& opts )
{
  const auto m = collect( f, mu, opts.cap );
  power_report report;
  report.function_name = f.kind();
  report.measure_name = mu.name();
  for ( int k = 0; k < f.arity(); ++k )
  {
    variable_power row;
    row.k = k;
    row.marginal = m.mean_x[k];
    row.influence = m.pivotal[k];
    if ( !degenerate( m.mean_x[k] ) )
    {
      row.effect = effect_from( m, k );
    }
    report.rows.push_back( std::move( row ) );
  }
  if ( opts.banzhaf )
  {
    report.banzhaf = banzhaf( f, opts.cap );
  }
  if ( opts.shapley_shubik )
  {
    report.shapley_shubik = shapley_shubik( f, opts.cap );
  }
  return report;
}

} // namespace wmaj
