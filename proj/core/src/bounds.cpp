#include "wmaj/bounds.hpp"

#include "wmaj/error.hpp"

#include <algorithm>
#include <bit>

namespace wmaj
{

namespace
{

rational clamp01( const rational& v )
{
  if ( sgn( v ) < 0 )
  {
    return 0;
  }
  if ( v > 1 )
  {
    return 1;
  }
  return v;
}

/* Formulas without validation; the instance checker also needs p = 1. */
rational prob_formula( const rational& p, const rational& q, const rational& delta )
{
  return clamp01( 1 - delta * p * ( 1 - p ) / ( p - q ) );
}

rational lin_formula( const rational& p, const rational& q, const rational& delta )
{
  if ( delta >= branch_point( p, q ) )
  {
    return clamp01( ( p - q ) / ( 1 - q ) );
  }
  return clamp01( std::max( rational( delta * p ), prob_formula( p, q, delta ) ) );
}

void require( bool ok, const std::string& what )
{
  if ( !ok )
  {
    throw error( errc::invalid_input, what );
  }
}

} // namespace

void bound_input::validate() const
{
  require( sgn( q ) > 0 && q < 1, "q must lie in (0,1), got " + to_string( q ) );
  require( p > q && p < 1, "p must lie in (q,1), got p=" + to_string( p ) + " q=" + to_string( q ) );
  require( sgn( delta ) >= 0, "delta must be non-negative, got " + to_string( delta ) );
}

rational branch_point( const rational& p, const rational& q )
{
  return ( p - q ) / ( p * ( 1 - q ) );
}

rational bound_prob( const bound_input& in )
{
  in.validate();
  return prob_formula( in.p, in.q, in.delta );
}

rational bound_lin( const bound_input& in )
{
  in.validate();
  return lin_formula( in.p, in.q, in.delta );
}

tightness_report verify_tightness( const rational& p, const rational& q, const rational& delta, int n, int r )
{
  require( n >= 1 && r >= 0 && r < n, "need 0 <= r < n, got n=" + std::to_string( n ) + " r=" + std::to_string( r ) );
  const rational qr = ratio( r, n );
  const rational qp = ratio( r + 1, n );
  require( p > qp && p < 1, "need (r+1)/n < p < 1, got p=" + to_string( p ) );
  bound_input{ p, q, delta }.validate();

  // variables (A, B)
  lp::linear_program prog;
  prog.direction = lp::sense::minimize;
  prog.objective = { 1, 0 };
  prog.upper = { rational( 1 ), std::nullopt };
  prog.constraints = {
      { { qp, -1 }, lp::relation::less_equal, 0 },                    // q'A <= B
      { { -1, 1 }, lp::relation::less_equal, 0 },                     // B <= A
      { { 0, 1 }, lp::relation::less_equal, p },                      // p - B >= 0
      { { qr, -1 }, lp::relation::less_equal, qr - p },               // p - B <= q(1-A)
      { { -p, 1 }, lp::relation::less_equal, delta * p * ( 1 - p ) }, // B - pA <= delta p(1-p)
  };

  tightness_report rep;
  rep.solution = lp::solve( prog );
  if ( rep.solution.status != lp::status::optimal )
  {
    throw error( errc::verification_failed, "tightness program is " + lp::to_string( rep.solution.status ) );
  }
  const rational A = rep.solution.primal[0];
  const rational B = rep.solution.primal[1];
  rep.lp_min = A;
  rep.lp_b = B;
  rep.closed_form = lin_formula( p, q, delta );
  rep.closed_form_discrete = lin_formula( p, qr, delta );

  auto& a = rep.witness;
  a.assign( n + 1, rational( 0 ) );
  // upper part: weights r+1 and n with mean B/A (r+1 < n since p > q')
  const rational top = ( n * B - ( r + 1 ) * A ) / ( n - r - 1 );
  a[n] += top;
  a[r + 1] += A - top;
  // lower part: weights 0 and r with mean B'/A'
  const rational lower_mass = 1 - A;
  const rational lower_mean = p - B;
  if ( r == 0 )
  {
    a[0] += lower_mass;
  }
  else
  {
    const rational at_r = n * lower_mean / r;
    a[r] += at_r;
    a[0] += lower_mass - at_r;
  }

  rational total = 0, mean = 0, upper_mass = 0, upper_mean = 0;
  bool nonneg = true;
  for ( int i = 0; i <= n; ++i )
  {
    nonneg = nonneg && sgn( a[i] ) >= 0;
    total += a[i];
    mean += a[i] * ratio( i, n );
    if ( i > r )
    {
      upper_mass += a[i];
      upper_mean += a[i] * ratio( i, n );
    }
  }
  const bool ok = nonneg && total == 1 && mean == p && upper_mean - p * upper_mass <= delta * p * ( 1 - p ) &&
                  upper_mass == A;
  if ( !ok || !lp::verify( prog, rep.solution ) )
  {
    throw error( errc::verification_failed, "symmetric witness fails the original constraints" );
  }
  return rep;
}

bool_fn threshold_function( const std::vector<rational>& weights, const rational& q, bool tie_value )
{
  const int n = static_cast<int>( weights.size() );
  if ( n > default_enumeration_cap )
  {
    throw error( errc::too_large, "threshold function on " + std::to_string( n ) + " variables" );
  }
  std::vector<bool> bits( std::size_t( 1 ) << n );
  for ( std::uint64_t x = 0; x < bits.size(); ++x )
  {
    rational s = 0;
    for ( int i = 0; i < n; ++i )
    {
      s += ( ( bit_at( x, n, i ) ? 1 : 0 ) - q ) * weights[i];
    }
    bits[x] = sgn( s ) > 0 || ( sgn( s ) == 0 && tie_value );
  }
  return bool_fn::truth_table( n, std::move( bits ) );
}

lemma1_report check_lemma1_on_instance( const std::vector<rational>& weights, const rational& q, const bool_fn& f,
                                        const measure& mu, int cap )
{
  const int n = f.arity();
  if ( static_cast<int>( weights.size() ) != n || mu.arity() != n )
  {
    throw error( errc::length_mismatch, "weights, function and measure must share the same n" );
  }
  if ( !is_enumerable( mu ) )
  {
    throw error( errc::unsupported, "instance check needs an enumerable measure" );
  }
  require( sgn( q ) > 0 && q < 1, "q must lie in (0,1), got " + to_string( q ) );
  require( std::all_of( weights.begin(), weights.end(), []( const rational& w ) { return sgn( w ) >= 0; } ),
           "weights must be non-negative" );
  const rational W = sum( weights );
  require( sgn( W ) > 0, "weights must not all be zero" );

  const auto table = to_truth_table( f, cap );
  const auto& bits = truth_bits( table );
  std::vector<rational> level( bits.size() );
  for ( std::uint64_t x = 0; x < bits.size(); ++x )
  {
    rational s = 0;
    for ( int i = 0; i < n; ++i )
    {
      if ( bit_at( x, n, i ) )
      {
        s += weights[i];
      }
    }
    level[x] = s;
    const int side = sgn( s - q * W );
    if ( ( side > 0 && !bits[x] ) || ( side < 0 && bits[x] ) )
    {
      throw error( errc::invalid_input, "f disagrees with the weighted threshold at " + to_bitstring( point_of( x, n ) ) );
    }
  }

  std::vector<rational> pi( n, rational( 0 ) ), mean_fx( n, rational( 0 ) );
  rational mu_f = 0;
  for_each_atom(
      mu,
      [&]( std::uint64_t x, const rational& m ) {
        if ( bits[x] )
        {
          mu_f += m;
        }
        for ( int i = 0; i < n; ++i )
        {
          if ( bit_at( x, n, i ) )
          {
            pi[i] += m;
            if ( bits[x] )
            {
              mean_fx[i] += m;
            }
          }
        }
      },
      cap );

  lemma1_report rep;
  rep.q = q;
  rep.mu_f = mu_f;
  rational wp = 0;
  for ( int i = 0; i < n; ++i )
  {
    wp += weights[i] * pi[i];
    rep.covariance_sum += weights[i] * ( mean_fx[i] - mu_f * pi[i] );
  }
  rep.p = wp / W;
  if ( rep.p <= q )
  {
    throw error( errc::hypothesis_violated, "p = " + to_string( rep.p ) + " does not exceed q = " + to_string( q ) );
  }

  // mu[(sum_i w_i Y_i) g] by direct enumeration
  for_each_atom(
      mu,
      [&]( std::uint64_t x, const rational& m ) {
        if ( !bits[x] )
        {
          rep.middle += m * ( wp - level[x] );
        }
      },
      cap );

  const rational var = rep.p * ( 1 - rep.p );
  // at p = 1 every weighted coordinate is a.s. 1, so all covariances vanish
  rep.delta = sgn( var ) == 0 ? rational( 0 ) : rep.covariance_sum / ( var * W );
  rep.g1_lower = ( rep.p - q ) * W * ( 1 - mu_f );
  rep.g2_upper = var * rep.delta * W;
  rep.bound_prob = prob_formula( rep.p, q, rep.delta );
  rep.bound_lin = rep.p < 1 ? lin_formula( rep.p, q, rep.delta ) : rational( 1 );

  if ( rep.g1_lower > rep.middle )
  {
    throw error( errc::verification_failed, "(p-q) W (1 - mu[f]) exceeds mu[(sum w Y) g]" );
  }
  if ( rep.middle != rep.covariance_sum || rep.covariance_sum > rep.g2_upper )
  {
    throw error( errc::verification_failed, "mu[(sum w Y) g] does not match p(1-p) delta W" );
  }
  if ( mu_f < rep.bound_prob || mu_f < rep.bound_lin )
  {
    throw error( errc::verification_failed, "mu[f] = " + to_string( mu_f ) + " falls below a lower bound" );
  }
  return rep;
}

lemma1_report check_lemma1_on_instance( const bool_fn& f, const measure& mu, const rational& q, int cap )
{
  const auto* wm = std::get_if<weighted_majority_repr>( &f.representation() );
  if ( !wm )
  {
    throw error( errc::invalid_input, "expected a weighted majority function, got " + f.kind() );
  }
  return check_lemma1_on_instance( wm->weights, q, f, mu, cap );
}

duplicated_instance duplicate_by_weight( const bool_fn& f, const measure& mu, int cap )
{
  const auto* wm = std::get_if<weighted_majority_repr>( &f.representation() );
  if ( !wm )
  {
    throw error( errc::invalid_input, "expected a weighted majority function, got " + f.kind() );
  }
  if ( mu.arity() != f.arity() )
  {
    throw error( errc::length_mismatch, "measure and function disagree on n" );
  }
  const int n = f.arity();
  std::vector<int> w( n );
  int total = 0;
  for ( int i = 0; i < n; ++i )
  {
    const auto& wi = wm->weights[i];
    require( wi.get_den() == 1 && sgn( wi ) > 0, "duplication needs positive integer weights" );
    require( wi.get_num() <= cap, "weight too large to duplicate" );
    w[i] = static_cast<int>( wi.get_num().get_si() );
    total += w[i];
  }
  if ( total > cap )
  {
    throw error( errc::too_large, "duplicated instance has " + std::to_string( total ) + " variables" );
  }

  duplicated_instance out{ {}, bool_fn::majority( 1 ), measure::all_same( 1, 0 ) };
  for ( int i = 0, s = 0; i < n; s += w[i], ++i )
  {
    out.block_start.push_back( s );
  }
  const auto expand = [&]( std::uint64_t x ) {
    std::uint64_t y = 0;
    for ( int i = 0; i < n; ++i )
    {
      if ( bit_at( x, n, i ) )
      {
        for ( int c = 0; c < w[i]; ++c )
        {
          y |= flip_mask( total, out.block_start[i] + c );
        }
      }
    }
    return y;
  };

  const auto table = to_truth_table( f, cap );
  const auto& fbits = truth_bits( table );
  std::vector<bool> bits( std::size_t( 1 ) << total, false );
  for ( std::uint64_t y = 0; y < bits.size(); ++y )
  {
    const int ones = std::popcount( y );
    bits[y] = 2 * ones > total;
  }
  for ( std::uint64_t x = 0; x < fbits.size(); ++x )
  {
    const auto y = expand( x );
    if ( 2 * std::popcount( y ) == total )
    {
      bits[y] = fbits[x];
    }
  }
  out.g = bool_fn::truth_table( total, std::move( bits ) );

  std::map<std::uint64_t, rational> mass;
  for_each_atom( mu, [&]( std::uint64_t x, const rational& m ) { mass[expand( x )] += m; }, cap );
  out.nu = measure::explicit_masses( total, std::move( mass ) );
  return out;
}

} // namespace wmaj
