#include "wmaj/classify.hpp"

#include "wmaj/error.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>

namespace wmaj
{

namespace
{

struct analysis
{
  bool_fn table;
  zero_hypergraph h;
  cover_number tau;
};

bool_fn checked_table( const bool_fn& f, int cap )
{
  if ( f.arity() > cap )
  {
    throw error( errc::too_large, "classification of " + std::to_string( f.arity() ) + " variables exceeds cap " +
                                      std::to_string( cap ) );
  }
  auto table = to_truth_table( f, cap );
  if ( !is_monotone( table, cap ) )
  {
    throw error( errc::not_monotone, "function is not monotone" );
  }
  if ( !is_antisymmetric( table, cap ) )
  {
    throw error( errc::not_antisymmetric, "function is not anti-symmetric" );
  }
  return table;
}

zero_hypergraph edges_of( const bool_fn& table )
{
  const auto& bits = truth_bits( table );
  zero_hypergraph h{ table.arity(), {} };
  for ( std::uint64_t x = 0; x < bits.size(); ++x )
  {
    if ( !bits[x] )
    {
      h.edges.push_back( x );
    }
  }
  return h;
}

analysis analyze( const bool_fn& f, int cap )
{
  auto table = checked_table( f, cap );
  auto h = edges_of( table );
  auto tau = tau_star( h );
  return { std::move( table ), std::move( h ), std::move( tau ) };
}

/* Sign of sum_i w_i (2 x_i - 1) for the point with canonical index x. */
int weighted_sign( const std::vector<rational>& w, std::uint64_t x )
{
  const int n = static_cast<int>( w.size() );
  rational total = 0;
  for ( int i = 0; i < n; ++i )
  {
    if ( bit_at( x, n, i ) )
    {
      total += w[i];
    }
    else
    {
      total -= w[i];
    }
  }
  return sgn( total );
}

tie_table ties_from( const std::vector<rational>& w, const bool_fn& table )
{
  const auto& bits = truth_bits( table );
  tie_table ties;
  for ( std::uint64_t x = 0; x < bits.size(); ++x )
  {
    if ( weighted_sign( w, x ) == 0 )
    {
      ties.emplace( point_of( x, table.arity() ), bits[x] );
    }
  }
  return ties;
}

bool realizes( const std::vector<rational>& w, const tie_table& ties, const bool_fn& table )
{
  const auto g = to_truth_table( bool_fn::weighted_majority( w, ties ), table.arity() );
  return truth_bits( g ) == truth_bits( table );
}

explicit_measure adversarial_from( const analysis& a )
{
  if ( a.tau.at_least_two() )
  {
    throw error( errc::not_applicable, "tau* = " + ( a.tau.value ? to_string( *a.tau.value ) : std::string( "infinity" ) ) +
                                           " >= 2: the function is a weighted majority" );
  }
  const auto& tau = *a.tau.value;
  const int n = a.h.n;
  explicit_measure mu{ n, {} };
  for ( std::size_t e = 0; e < a.h.edges.size(); ++e )
  {
    if ( sgn( a.tau.cover[e] ) != 0 )
    {
      mu.mass.emplace( a.h.edges[e], a.tau.cover[e] / tau );
    }
  }

  const auto& bits = truth_bits( a.table );
  rational total = 0;
  std::vector<rational> marginals( n, rational( 0 ) );
  for ( const auto& [x, m] : mu.mass )
  {
    if ( bits[x] )
    {
      throw error( errc::verification_failed, "adversarial measure charges a point where f = 1" );
    }
    total += m;
    for ( int k = 0; k < n; ++k )
    {
      if ( bit_at( x, n, k ) )
      {
        marginals[k] += m;
      }
    }
  }
  const rational floor = 1 / tau;
  if ( total != 1 || floor <= rational( 1, 2 ) ||
       std::any_of( marginals.begin(), marginals.end(), [&]( const rational& p ) { return p < floor; } ) )
  {
    throw error( errc::verification_failed, "adversarial measure failed exact re-verification" );
  }
  return mu;
}

weight_certificate weights_from( const analysis& a )
{
  if ( !a.tau.at_least_two() )
  {
    throw error( errc::not_applicable, "tau* = " + to_string( *a.tau.value ) + " < 2: the function is not a weighted majority" );
  }
  const int n = a.h.n;

  if ( a.tau.infinite() )
  {
    // some variable lies in no zero-set, so f is that dictator; the
    // feasibility program finds it directly
    auto w = wm_oracle_weights( a.table, n );
    if ( !w )
    {
      throw error( errc::verification_failed, "infinite tau* but the weight feasibility program is infeasible" );
    }
    auto ties = ties_from( *w, a.table );
    if ( !realizes( *w, ties, a.table ) )
    {
      throw error( errc::verification_failed, "feasibility weights do not reproduce f" );
    }
    return { std::move( *w ), std::move( ties ), 0 };
  }

  const auto& w = a.tau.weights;
  if ( *a.tau.value == 2 )
  {
    auto ties = ties_from( w, a.table );
    if ( !realizes( w, ties, a.table ) )
    {
      throw error( errc::verification_failed, "tau* = 2 weights do not reproduce f" );
    }
    return { w, std::move( ties ), 0 };
  }

  // tau* > 2: perturb by eta 2^-i, halving eta until the realization is
  // strict (no ties) and reproduces f
  rational eta = 1 / ( 4 * n * *a.tau.value );
  for ( int halvings = 0; halvings <= 64; ++halvings, eta /= 2 )
  {
    std::vector<rational> perturbed( n );
    rational step = eta;
    for ( int i = 0; i < n; ++i )
    {
      step /= 2;
      perturbed[i] = w[i] + step;
    }
    auto ties = ties_from( perturbed, a.table );
    if ( ties.empty() && realizes( perturbed, ties, a.table ) )
    {
      return { std::move( perturbed ), {}, halvings };
    }
  }
  throw error( errc::verification_failed, "perturbation schedule exhausted without a valid realization" );
}

void check_permutation( const permutation& p, int n )
{
  if ( static_cast<int>( p.size() ) != n )
  {
    throw error( errc::length_mismatch, "permutation of length " + std::to_string( p.size() ) + " for n=" + std::to_string( n ) );
  }
  std::vector<bool> seen( n, false );
  for ( int v : p )
  {
    if ( v < 0 || v >= n || seen[v] )
    {
      throw error( errc::invalid_input, "generator is not a permutation of 0..n-1" );
    }
    seen[v] = true;
  }
}

std::uint64_t act( const permutation& sigma, std::uint64_t x, int n )
{
  std::uint64_t y = 0;
  for ( int i = 0; i < n; ++i )
  {
    if ( bit_at( x, n, sigma[i] ) )
    {
      y |= flip_mask( n, i );
    }
  }
  return y;
}

} // namespace

zero_hypergraph zero_hypergraph_of( const bool_fn& f, int cap )
{
  return edges_of( checked_table( f, cap ) );
}

cover_number tau_star( const zero_hypergraph& h )
{
  cover_number out;
  auto& lp = out.program;
  const auto m = h.edges.size();
  lp.direction = lp::sense::minimize;
  lp.objective.assign( m, rational( 1 ) );
  for ( int k = 0; k < h.n; ++k )
  {
    lp::constraint c;
    c.row.assign( m, rational( 0 ) );
    for ( std::size_t e = 0; e < m; ++e )
    {
      if ( bit_at( h.edges[e], h.n, k ) )
      {
        c.row[e] = 1;
      }
    }
    c.rel = lp::relation::greater_equal;
    c.rhs = 1;
    lp.constraints.push_back( std::move( c ) );
  }
  out.solution = lp::solve( lp );
  if ( out.solution.status == lp::status::infeasible )
  {
    return out;
  }
  if ( out.solution.status != lp::status::optimal )
  {
    throw error( errc::verification_failed, "covering program cannot be unbounded" );
  }
  out.value = out.solution.value;
  out.cover = out.solution.primal;
  out.weights.assign( out.solution.dual.begin(), out.solution.dual.begin() + h.n );
  return out;
}

explicit_measure adversarial_measure( const bool_fn& f, int cap )
{
  return adversarial_from( analyze( f, cap ) );
}

weight_certificate extract_weights( const bool_fn& f, int cap )
{
  return weights_from( analyze( f, cap ) );
}

std::optional<std::vector<rational>> wm_oracle_weights( const bool_fn& f, int cap )
{
  const auto table = to_truth_table( f, cap );
  if ( !is_monotone( table, cap ) || !is_antisymmetric( table, cap ) )
  {
    return std::nullopt;
  }
  const int n = f.arity();
  const auto& bits = truth_bits( table );

  lp::linear_program lp;
  lp.direction = lp::sense::minimize;
  lp.objective.assign( n, rational( 0 ) );
  lp.constraints.push_back( { std::vector<rational>( n, rational( 1 ) ), lp::relation::equal, rational( 1 ) } );
  for ( std::uint64_t x = 0; x < bits.size(); ++x )
  {
    if ( !bits[x] )
    {
      continue;
    }
    bool minimal = true;
    for ( int k = 0; k < n && minimal; ++k )
    {
      const auto mask = flip_mask( n, k );
      minimal = !( ( x & mask ) && bits[x ^ mask] );
    }
    if ( !minimal )
    {
      continue;
    }
    lp::constraint c;
    for ( int i = 0; i < n; ++i )
    {
      c.row.emplace_back( bit_at( x, n, i ) ? 1 : -1 );
    }
    c.rel = lp::relation::greater_equal;
    c.rhs = 0;
    lp.constraints.push_back( std::move( c ) );
  }
  const auto sol = lp::solve( lp );
  if ( sol.status != lp::status::optimal )
  {
    return std::nullopt;
  }
  return sol.primal;
}

bool wm_oracle( const bool_fn& f, int cap )
{
  return wm_oracle_weights( f, cap ).has_value();
}

explicit_measure orbit_measure( const bool_fn& f, std::span<const permutation> generators, std::span<const std::uint8_t> x,
                                int cap )
{
  const int n = f.arity();
  if ( static_cast<int>( x.size() ) != n )
  {
    throw error( errc::length_mismatch, "seed vector has " + std::to_string( x.size() ) + " coordinates" );
  }
  for ( const auto& g : generators )
  {
    check_permutation( g, n );
  }

  // the group is transitive iff the orbit of variable 0 is everything
  std::vector<bool> reached( n, false );
  std::deque<int> queue{ 0 };
  reached[0] = true;
  while ( !queue.empty() )
  {
    const int v = queue.front();
    queue.pop_front();
    for ( const auto& g : generators )
    {
      if ( !reached[g[v]] )
      {
        reached[g[v]] = true;
        queue.push_back( g[v] );
      }
    }
  }
  if ( std::find( reached.begin(), reached.end(), false ) != reached.end() )
  {
    throw error( errc::not_transitive, "generated group is not transitive on the variables" );
  }

  const auto table = to_truth_table( f, cap );
  const auto& bits = truth_bits( table );
  for ( const auto& g : generators )
  {
    for ( std::uint64_t y = 0; y < bits.size(); ++y )
    {
      if ( bits[act( g, y, n )] != bits[y] )
      {
        throw error( errc::not_invariant, "f changes under a generator at " + to_bitstring( point_of( y, n ) ) );
      }
    }
  }

  const auto seed = index_of( x );
  if ( bits[seed] || 2 * std::popcount( seed ) <= n )
  {
    throw error( errc::bad_seed_vector, "seed must satisfy f(x) = 0 and |x| > n/2" );
  }

  std::set<std::uint64_t> orbit{ seed };
  std::deque<std::uint64_t> frontier{ seed };
  while ( !frontier.empty() )
  {
    const auto y = frontier.front();
    frontier.pop_front();
    for ( const auto& g : generators )
    {
      const auto z = act( g, y, n );
      if ( orbit.insert( z ).second )
      {
        frontier.push_back( z );
      }
    }
  }

  explicit_measure mu{ n, {} };
  const rational mass( 1, static_cast<unsigned long>( orbit.size() ) );
  std::vector<rational> marginals( n, rational( 0 ) );
  for ( auto y : orbit )
  {
    mu.mass.emplace( y, mass );
    for ( int k = 0; k < n; ++k )
    {
      if ( bit_at( y, n, k ) )
      {
        marginals[k] += mass;
      }
    }
  }
  if ( std::any_of( marginals.begin(), marginals.end(), []( const rational& p ) { return p <= rational( 1, 2 ); } ) )
  {
    throw error( errc::verification_failed, "orbit measure has a marginal at most 1/2" );
  }
  return mu;
}

std::vector<permutation> tree_symmetries( int k, int levels )
{
  if ( k < 2 || levels < 1 )
  {
    throw error( errc::invalid_input, "tree needs k >= 2 and at least one level" );
  }
  int n = 1;
  for ( int i = 0; i < levels; ++i )
  {
    n *= k;
  }
  std::vector<permutation> gens;
  int span = n;
  for ( int d = 0; d < levels; ++d, span /= k )
  {
    const int block = span / k;
    for ( int start = 0; start < n; start += span )
    {
      permutation shift( n ), swap( n );
      for ( int i = 0; i < n; ++i )
      {
        shift[i] = swap[i] = i;
      }
      for ( int c = 0; c < k; ++c )
      {
        for ( int o = 0; o < block; ++o )
        {
          shift[start + c * block + o] = start + ( ( c + 1 ) % k ) * block + o;
        }
      }
      for ( int o = 0; o < block; ++o )
      {
        swap[start + o] = start + block + o;
        swap[start + block + o] = start + o;
      }
      gens.push_back( std::move( shift ) );
      if ( k > 2 )
      {
        gens.push_back( std::move( swap ) );
      }
    }
  }
  return gens;
}

permutation cyclic_shift( int n )
{
  permutation p( n );
  for ( int i = 0; i < n; ++i )
  {
    p[i] = ( i + 1 ) % n;
  }
  return p;
}

classify_result classify( const bool_fn& f, int cap )
{
  auto a = analyze( f, cap );
  if ( a.tau.at_least_two() )
  {
    auto cert = weights_from( a );
    return { std::move( a.tau ), std::move( cert ) };
  }
  adversarial_witness witness{ adversarial_from( a ), {} };
  for ( int k = 0; k < a.h.n; ++k )
  {
    rational ones = 0;
    for ( const auto& [x, m] : witness.mu.mass )
    {
      if ( bit_at( x, a.h.n, k ) )
      {
        ones += m;
      }
    }
    if ( ones == 1 )
    {
      witness.null_conditioning.push_back( k );
    }
  }
  return { std::move( a.tau ), std::move( witness ) };
}

} // namespace wmaj
