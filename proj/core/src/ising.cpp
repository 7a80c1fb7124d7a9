#include "wmaj/ising.hpp"

#include "wmaj/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

namespace wmaj::ising
{

int tree_params::leaves() const
{
  int n = 1;
  for ( int i = 0; i < depth; ++i )
  {
    n *= 3;
  }
  return n;
}

bool tree_params::in_ceiling_regime() const
{
  return eps == delta && eps <= rational( 1, 100 );
}

void tree_params::validate() const
{
  if ( depth < 1 || depth > 19 )
  {
    throw error( errc::invalid_params, "tree depth must lie in [1,19], got " + std::to_string( depth ) );
  }
  if ( sgn( eps ) < 0 || eps >= rational( 1, 2 ) )
  {
    throw error( errc::invalid_params, "eps must lie in [0,1/2), got " + to_string( eps ) );
  }
  if ( sgn( delta ) < 0 || delta >= 1 )
  {
    throw error( errc::invalid_params, "delta must lie in [0,1), got " + to_string( delta ) );
  }
}

namespace
{

rational majority_of_three( const rational& c )
{
  // c^3 + 3 c^2 (1 - c) = c^2 (3 - 2c)
  return c * c * ( 3 - 2 * c );
}

rational round_to_grid( const rational& v, unsigned bits )
{
  integer scaled = v.get_num();
  scaled <<= bits;
  scaled /= v.get_den();
  rational out( scaled );
  out /= rational( integer( 1 ) << bits );
  return out;
}

constexpr unsigned rounding_bits = 160;

} // namespace

bp_result bp_exact( const tree_params& tp )
{
  tp.validate();
  bp_result out;
  out.exact = tp.depth <= exact_depth_limit;
  auto& a = out.state.a;
  auto& b = out.state.b;
  a.push_back( 1 - tp.delta );
  b.push_back( rational( 0 ) );

  const rational keep = 1 - tp.eps;
  double error = 0.0;
  const double grid = std::ldexp( 1.0, -static_cast<int>( rounding_bits ) );
  for ( int k = 0; k < tp.depth; ++k )
  {
    const rational c0 = keep * a.back() + tp.eps * b.back();
    const rational c1 = keep * b.back() + tp.eps * a.back();
    rational next_a = majority_of_three( c0 );
    rational next_b = majority_of_three( c1 );
    if ( !out.exact )
    {
      // mixing is a contraction and the cubic has slope at most 3/2
      next_a = round_to_grid( next_a, rounding_bits );
      next_b = round_to_grid( next_b, rounding_bits );
      error = 1.5 * error + grid;
    }
    a.push_back( std::move( next_a ) );
    b.push_back( std::move( next_b ) );
  }
  out.mu_m = 1 - ( a.back() + b.back() ) / 2;
  out.error_bound = error;
  return out;
}

claim1_report claim1_margin( const tree_params& tp )
{
  tp.validate();
  if ( !tp.in_ceiling_regime() )
  {
    throw error( errc::out_of_regime, "the ceiling check needs eps == delta <= 1/100, got eps=" + to_string( tp.eps ) +
                                          ", delta=" + to_string( tp.delta ) );
  }
  claim1_report report;
  const rational s = 1 - tp.eps;
  report.h = s * s * s * ( 3 - 2 * s * s );
  report.h_at_least_one = report.h >= 1;

  const auto bp = bp_exact( tp );
  report.root0_majority0 = bp.state.a;
  const rational floor = 1 - tp.delta;
  report.conditional_ok = std::all_of( bp.state.a.begin(), bp.state.a.end(),
                                       [&]( const rational& v ) { return v >= floor; } );
  report.mu_m = bp.mu_m;
  report.ceiling = ( 1 + tp.delta ) / 2;
  report.ceiling_ok = bp.mu_m <= report.ceiling;
  return report;
}

tree_sampler::tree_sampler( const tree_params& tp )
    : depth_( tp.depth ), leaves_( tp.leaves() ), flip_( tp.eps ), resample_( tp.delta )
{
  tp.validate();
  level_.reserve( leaves_ );
  next_.reserve( leaves_ );
}

void tree_sampler::draw( rng& g, std::span<std::uint8_t> spins, std::span<std::uint8_t> votes )
{
  level_.assign( 1, static_cast<std::uint8_t>( g.next() >> 63 ) );
  for ( int d = 0; d < depth_; ++d )
  {
    next_.resize( level_.size() * 3 );
    for ( std::size_t v = 0; v < level_.size(); ++v )
    {
      for ( std::size_t c = 0; c < 3; ++c )
      {
        next_[3 * v + c] = level_[v] ^ static_cast<std::uint8_t>( flip_( g ) );
      }
    }
    level_.swap( next_ );
  }
  for ( int i = 0; i < leaves_; ++i )
  {
    spins[i] = level_[i];
    votes[i] = level_[i] | static_cast<std::uint8_t>( resample_( g ) );
  }
}

bool recursive_majority3( std::span<const std::uint8_t> leaves, std::vector<std::uint8_t>& scratch )
{
  scratch.assign( leaves.begin(), leaves.end() );
  auto size = scratch.size();
  while ( size > 1 )
  {
    size /= 3;
    for ( std::size_t v = 0; v < size; ++v )
    {
      scratch[v] = ( scratch[3 * v] + scratch[3 * v + 1] + scratch[3 * v + 2] ) >= 2;
    }
  }
  return scratch[0] != 0;
}

namespace
{

/* Runs `body(batch_index, batch_samples, rng)` over a fixed batch schedule.
   Each batch owns its engine, so results do not depend on thread count. */
template<class Tally, class Body>
std::vector<Tally> run_batches( std::uint64_t samples, std::uint64_t seed, const mc_options& opts, Body body )
{
  const std::size_t batches = std::max<std::size_t>( 1, std::min<std::uint64_t>( opts.batches, samples ) );
  std::vector<Tally> tallies( batches );
  unsigned threads = opts.threads ? opts.threads : std::max( 1u, std::thread::hardware_concurrency() );
  threads = static_cast<unsigned>( std::min<std::size_t>( threads, batches ) );

  auto work = [&]( std::size_t b ) {
    const std::uint64_t count = samples / batches + ( b < samples % batches ? 1 : 0 );
    rng g( stream_seed( seed, b ) );
    body( tallies[b], count, g );
  };

  if ( threads <= 1 )
  {
    for ( std::size_t b = 0; b < batches; ++b )
    {
      work( b );
    }
    return tallies;
  }
  std::vector<std::thread> pool;
  for ( unsigned t = 0; t < threads; ++t )
  {
    pool.emplace_back( [&, t] {
      for ( std::size_t b = t; b < batches; b += threads )
      {
        work( b );
      }
    } );
  }
  for ( auto& th : pool )
  {
    th.join();
  }
  return tallies;
}

struct strata
{
  std::uint64_t n[2] = { 0, 0 };
  std::uint64_t wins[2] = { 0, 0 };

  void add( bool stratum, bool win )
  {
    ++n[stratum];
    wins[stratum] += win;
  }
  void merge( const strata& o )
  {
    for ( int s = 0; s < 2; ++s )
    {
      n[s] += o.n[s];
      wins[s] += o.wins[s];
    }
  }
};

mc_estimate difference( const strata& s, const char* label )
{
  if ( s.n[0] == 0 || s.n[1] == 0 )
  {
    throw error( errc::degenerate_stratum, std::string( label ) + ": a conditioning value was never sampled" );
  }
  const double p1 = static_cast<double>( s.wins[1] ) / s.n[1];
  const double p0 = static_cast<double>( s.wins[0] ) / s.n[0];
  mc_estimate e;
  e.estimate = p1 - p0;
  e.std_error = std::sqrt( p1 * ( 1 - p1 ) / s.n[1] + p0 * ( 1 - p0 ) / s.n[0] );
  e.samples = s.n[0] + s.n[1];
  return e;
}

} // namespace

mc_estimate mc_mu_m( const tree_params& tp, std::uint64_t samples, std::uint64_t seed, const mc_options& opts )
{
  tp.validate();
  if ( samples < 1 )
  {
    throw error( errc::invalid_params, "samples must be at least 1" );
  }
  struct tally
  {
    std::uint64_t wins = 0;
  };
  const auto tallies = run_batches<tally>( samples, seed, opts, [&]( tally& t, std::uint64_t count, rng& g ) {
    tree_sampler sampler( tp );
    std::vector<std::uint8_t> spins( sampler.leaves() ), votes( sampler.leaves() ), scratch;
    for ( std::uint64_t s = 0; s < count; ++s )
    {
      sampler.draw( g, spins, votes );
      t.wins += recursive_majority3( votes, scratch );
    }
  } );
  std::uint64_t wins = 0;
  for ( const auto& t : tallies )
  {
    wins += t.wins;
  }
  mc_estimate e;
  e.samples = samples;
  e.estimate = static_cast<double>( wins ) / samples;
  e.std_error = std::sqrt( e.estimate * ( 1 - e.estimate ) / samples );
  return e;
}

effect_estimate mc_effect( const tree_params& tp, int leaf, std::uint64_t samples, std::uint64_t seed,
                           const mc_options& opts )
{
  tp.validate();
  if ( leaf < 0 || leaf >= tp.leaves() )
  {
    throw error( errc::index_out_of_range, "leaf " + std::to_string( leaf ) + " of " + std::to_string( tp.leaves() ) );
  }
  struct tally
  {
    strata by_vote, by_spin;
  };
  const auto tallies = run_batches<tally>( samples, seed, opts, [&]( tally& t, std::uint64_t count, rng& g ) {
    tree_sampler sampler( tp );
    std::vector<std::uint8_t> spins( sampler.leaves() ), votes( sampler.leaves() ), scratch;
    for ( std::uint64_t s = 0; s < count; ++s )
    {
      sampler.draw( g, spins, votes );
      const bool win = recursive_majority3( votes, scratch );
      t.by_vote.add( votes[leaf], win );
      t.by_spin.add( spins[leaf], win );
    }
  } );
  tally total;
  for ( const auto& t : tallies )
  {
    total.by_vote.merge( t.by_vote );
    total.by_spin.merge( t.by_spin );
  }
  return { difference( total.by_vote, "vote-conditioned effect" ), difference( total.by_spin, "spin-conditioned effect" ) };
}

claim2_bounds claim2_bound( int r, double eps )
{
  if ( r < 1 )
  {
    throw error( errc::invalid_params, "depth must be at least 1" );
  }
  const double half = ( r - 1 ) / 2.0;
  const double tail = std::pow( 2.0, -half );
  return { std::pow( 1.0 - eps / 2.0, half ) + tail, std::pow( 1.0 - 2.0 * eps, half ) + tail };
}

explicit_measure leaf_measure( const tree_params& tp )
{
  tp.validate();
  if ( tp.depth > 2 )
  {
    throw error( errc::too_large, "exact leaf enumeration is limited to depth 2" );
  }
  const int leaves = tp.leaves();
  int nodes = 0;
  for ( int d = 0, width = 1; d <= tp.depth; ++d, width *= 3 )
  {
    nodes += width;
  }
  const int first_leaf = nodes - leaves;

  // node v > 0 has parent (v - 1) / 3 in breadth-first order
  const rational keep = 1 - tp.eps;
  explicit_measure out{ leaves, {} };
  std::vector<std::uint8_t> y( nodes );
  for ( std::uint32_t config = 0; config < ( 1u << nodes ); ++config )
  {
    for ( int v = 0; v < nodes; ++v )
    {
      y[v] = ( config >> v ) & 1u;
    }
    rational weight( 1, 2 );
    for ( int v = 1; v < nodes; ++v )
    {
      weight *= y[v] == y[( v - 1 ) / 3] ? keep : tp.eps;
    }
    if ( sgn( weight ) == 0 )
    {
      continue;
    }
    std::uint64_t base = 0;
    std::vector<int> zero_leaves;
    for ( int i = 0; i < leaves; ++i )
    {
      if ( y[first_leaf + i] )
      {
        base |= flip_mask( leaves, i );
      }
      else
      {
        zero_leaves.push_back( i );
      }
    }
    const auto z = zero_leaves.size();
    for ( std::uint32_t subset = 0; subset < ( 1u << z ); ++subset )
    {
      std::uint64_t x = base;
      const int raised = std::popcount( subset );
      for ( std::size_t j = 0; j < z; ++j )
      {
        if ( ( subset >> j ) & 1u )
        {
          x |= flip_mask( leaves, zero_leaves[j] );
        }
      }
      const rational m = weight * pow( tp.delta, raised ) * pow( 1 - tp.delta, static_cast<unsigned>( z - raised ) );
      if ( sgn( m ) != 0 )
      {
        out.mass[x] += m;
      }
    }
  }
  return out;
}

} // namespace wmaj::ising
