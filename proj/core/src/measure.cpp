#include "wmaj/measure.hpp"

#include "wmaj/error.hpp"
#include "wmaj/ising.hpp"
#include "wmaj/rng.hpp"

#include <algorithm>
#include <bit>

namespace wmaj
{

namespace
{

void require_probability_open( const rational& p, const std::string& what )
{
  if ( sgn( p ) <= 0 || p >= 1 )
  {
    throw error( errc::invalid_input, what + " must lie strictly inside (0,1), got " + to_string( p ) );
  }
}

void require_arity( int n )
{
  if ( n < 1 )
  {
    throw error( errc::invalid_input, "measure needs n >= 1" );
  }
}

void require_cap( int n, int cap )
{
  if ( n > cap )
  {
    throw error( errc::too_large, "measure on " + std::to_string( n ) + " coordinates exceeds enumeration cap " +
                                      std::to_string( cap ) );
  }
}

std::string join( const std::vector<rational>& v )
{
  std::string s;
  for ( std::size_t i = 0; i < v.size(); ++i )
  {
    s += ( i ? "," : "" ) + to_string( v[i] );
  }
  return s;
}

/* Product-measure masses of all 2^n points, built coordinate by coordinate. */
std::vector<rational> product_masses( const std::vector<rational>& p )
{
  std::vector<rational> masses{ rational( 1 ) };
  for ( const auto& pk : p )
  {
    std::vector<rational> next( masses.size() * 2 );
    const rational qk = 1 - pk;
    for ( std::size_t i = 0; i < masses.size(); ++i )
    {
      next[2 * i] = masses[i] * qk;
      next[2 * i + 1] = masses[i] * pk;
    }
    masses = std::move( next );
  }
  return masses;
}

} // namespace

measure measure::product( std::vector<rational> p )
{
  require_arity( static_cast<int>( p.size() ) );
  for ( std::size_t k = 0; k < p.size(); ++k )
  {
    require_probability_open( p[k], "p_" + std::to_string( k + 1 ) );
  }
  const int n = static_cast<int>( p.size() );
  return measure( product_measure{ std::move( p ) }, n );
}

measure measure::uniform_product( int n, const rational& p )
{
  return product( std::vector<rational>( std::max( n, 0 ), p ) );
}

measure measure::explicit_masses( int n, std::map<std::uint64_t, rational> mass )
{
  require_arity( n );
  if ( n > 63 )
  {
    throw error( errc::too_large, "explicit measures are limited to 63 coordinates" );
  }
  rational total = 0;
  for ( auto it = mass.begin(); it != mass.end(); )
  {
    if ( it->first >> n )
    {
      throw error( errc::invalid_input, "atom index " + std::to_string( it->first ) + " outside {0,1}^" + std::to_string( n ) );
    }
    if ( sgn( it->second ) < 0 )
    {
      throw error( errc::invalid_input, "negative mass at " + to_bitstring( point_of( it->first, n ) ) );
    }
    total += it->second;
    it = sgn( it->second ) == 0 ? mass.erase( it ) : std::next( it );
  }
  if ( total != 1 )
  {
    throw error( errc::invalid_input, "masses sum to " + to_string( total ) + ", not 1" );
  }
  return measure( explicit_measure{ n, std::move( mass ) }, n );
}

measure measure::tmixture( int n, const rational& eps )
{
  require_arity( n );
  if ( sgn( eps ) < 0 || eps >= 1 )
  {
    throw error( errc::invalid_input, "t-mixture eps must lie in [0,1), got " + to_string( eps ) );
  }
  return measure( tmixture_measure{ n, eps }, n );
}

measure measure::all_same( int n, const rational& p )
{
  require_arity( n );
  if ( sgn( p ) < 0 || p > 1 )
  {
    throw error( errc::invalid_input, "all-same p must lie in [0,1], got " + to_string( p ) );
  }
  return measure( all_same_measure{ n, p }, n );
}

measure measure::ising_leaves( int depth, const rational& eps, const rational& delta )
{
  ising::tree_params tp{ depth, eps, delta };
  try
  {
    tp.validate();
  }
  catch ( const error& e )
  {
    throw error( errc::invalid_input, e.message() );
  }
  return measure( ising_leaves_measure{ depth, eps, delta }, tp.leaves() );
}

std::string measure::kind() const
{
  switch ( repr_.index() )
  {
  case 0: return "product";
  case 1: return "explicit";
  case 2: return "tmixture";
  case 3: return "all_same";
  default: return "ising_leaves";
  }
}

std::string measure::name() const
{
  return std::visit(
      []( const auto& r ) -> std::string {
        using T = std::decay_t<decltype( r )>;
        if constexpr ( std::is_same_v<T, product_measure> )
        {
          return "product(" + join( r.p ) + ")";
        }
        else if constexpr ( std::is_same_v<T, explicit_measure> )
        {
          return "explicit(n=" + std::to_string( r.n ) + ", atoms=" + std::to_string( r.mass.size() ) + ")";
        }
        else if constexpr ( std::is_same_v<T, tmixture_measure> )
        {
          return "tmixture(n=" + std::to_string( r.n ) + ", eps=" + to_string( r.eps ) + ")";
        }
        else if constexpr ( std::is_same_v<T, all_same_measure> )
        {
          return "all_same(n=" + std::to_string( r.n ) + ", p=" + to_string( r.p ) + ")";
        }
        else
        {
          return "ising_leaves(r=" + std::to_string( r.depth ) + ", eps=" + to_string( r.eps ) +
                 ", delta=" + to_string( r.delta ) + ")";
        }
      },
      repr_ );
}

bool is_enumerable( const measure& mu )
{
  return !std::holds_alternative<ising_leaves_measure>( mu.representation() );
}

rational tmixture_atom( int n, int ones, const rational& eps )
{
  // (1-t)^(n-k) = sum_j C(n-k, j) (-1)^j t^j, integrated term by term
  const int zeros = n - ones;
  rational integral = 0;
  for ( int j = 0; j <= zeros; ++j )
  {
    const unsigned power = static_cast<unsigned>( ones + j + 1 );
    rational term = ( 1 - pow( eps, power ) ) / rational( power );
    term *= binomial( zeros, j );
    if ( j % 2 )
    {
      integral -= term;
    }
    else
    {
      integral += term;
    }
  }
  return integral / ( 1 - eps );
}

rational tmixture_win_prob( int n, const rational& eps )
{
  if ( n < 1 || n % 2 == 0 )
  {
    throw error( errc::invalid_input, "t-mixture win probability needs odd n, got " + std::to_string( n ) );
  }
  if ( sgn( eps ) < 0 || eps >= 1 )
  {
    throw error( errc::invalid_input, "eps must lie in [0,1)" );
  }
  rational total = 0;
  for ( int k = n / 2 + 1; k <= n; ++k )
  {
    total += rational( binomial( n, k ) ) * tmixture_atom( n, k, eps );
  }
  return total;
}

rational prob_of( const measure& mu, std::span<const std::uint8_t> x )
{
  if ( static_cast<int>( x.size() ) != mu.arity() )
  {
    throw error( errc::length_mismatch, "point has " + std::to_string( x.size() ) + " coordinates, measure has " +
                                            std::to_string( mu.arity() ) );
  }
  return std::visit(
      [&]( const auto& r ) -> rational {
        using T = std::decay_t<decltype( r )>;
        if constexpr ( std::is_same_v<T, product_measure> )
        {
          rational m = 1;
          for ( std::size_t k = 0; k < x.size(); ++k )
          {
            m *= x[k] ? r.p[k] : rational( 1 - r.p[k] );
          }
          return m;
        }
        else if constexpr ( std::is_same_v<T, explicit_measure> )
        {
          auto it = r.mass.find( index_of( x ) );
          return it == r.mass.end() ? rational( 0 ) : it->second;
        }
        else if constexpr ( std::is_same_v<T, tmixture_measure> )
        {
          const int ones = static_cast<int>( std::count( x.begin(), x.end(), 1 ) );
          return tmixture_atom( r.n, ones, r.eps );
        }
        else if constexpr ( std::is_same_v<T, all_same_measure> )
        {
          const auto ones = std::count( x.begin(), x.end(), 1 );
          if ( ones == r.n )
          {
            return r.p;
          }
          return ones == 0 ? rational( 1 - r.p ) : rational( 0 );
        }
        else
        {
          throw error( errc::unsupported, "point masses of Ising leaf measures are not enumerable; use the ising module" );
        }
      },
      mu.representation() );
}

void for_each_atom( const measure& mu, const std::function<void( std::uint64_t, const rational& )>& visit, int cap )
{
  std::visit(
      [&]( const auto& r ) {
        using T = std::decay_t<decltype( r )>;
        if constexpr ( std::is_same_v<T, product_measure> )
        {
          require_cap( mu.arity(), cap );
          const auto masses = product_masses( r.p );
          for ( std::uint64_t i = 0; i < masses.size(); ++i )
          {
            visit( i, masses[i] );
          }
        }
        else if constexpr ( std::is_same_v<T, explicit_measure> )
        {
          for ( const auto& [index, m] : r.mass )
          {
            visit( index, m );
          }
        }
        else if constexpr ( std::is_same_v<T, tmixture_measure> )
        {
          require_cap( r.n, cap );
          std::vector<rational> by_count;
          for ( int k = 0; k <= r.n; ++k )
          {
            by_count.push_back( tmixture_atom( r.n, k, r.eps ) );
          }
          const std::uint64_t size = std::uint64_t{ 1 } << r.n;
          for ( std::uint64_t i = 0; i < size; ++i )
          {
            visit( i, by_count[std::popcount( i )] );
          }
        }
        else if constexpr ( std::is_same_v<T, all_same_measure> )
        {
          if ( r.n > 63 )
          {
            throw error( errc::too_large, "all-same measure on more than 63 coordinates" );
          }
          if ( r.p != 1 )
          {
            visit( 0, rational( 1 - r.p ) );
          }
          if ( sgn( r.p ) != 0 )
          {
            visit( ( std::uint64_t{ 1 } << r.n ) - 1, r.p );
          }
        }
        else
        {
          throw error( errc::unsupported, "Ising leaf measures are not enumerable; use the ising module" );
        }
      },
      mu.representation() );
}

rational marginal( const measure& mu, int k )
{
  if ( k < 0 || k >= mu.arity() )
  {
    throw error( errc::index_out_of_range, "coordinate " + std::to_string( k ) + " of a measure on " +
                                               std::to_string( mu.arity() ) );
  }
  return std::visit(
      [&]( const auto& r ) -> rational {
        using T = std::decay_t<decltype( r )>;
        if constexpr ( std::is_same_v<T, product_measure> )
        {
          return r.p[k];
        }
        else if constexpr ( std::is_same_v<T, explicit_measure> )
        {
          rational total = 0;
          for ( const auto& [index, m] : r.mass )
          {
            if ( bit_at( index, r.n, k ) )
            {
              total += m;
            }
          }
          return total;
        }
        else if constexpr ( std::is_same_v<T, tmixture_measure> )
        {
          return ( 1 + r.eps ) / 2;
        }
        else if constexpr ( std::is_same_v<T, all_same_measure> )
        {
          return r.p;
        }
        else
        {
          return ( 1 + r.delta ) / 2;
        }
      },
      mu.representation() );
}

rational expect( const measure& mu, const bool_fn& f, int cap )
{
  if ( f.arity() != mu.arity() )
  {
    throw error( errc::length_mismatch, "function has " + std::to_string( f.arity() ) + " variables, measure has " +
                                            std::to_string( mu.arity() ) );
  }
  const bool sparse = std::holds_alternative<explicit_measure>( mu.representation() ) ||
                      std::holds_alternative<all_same_measure>( mu.representation() );
  const bool_fn g = sparse ? f : to_truth_table( f, cap );
  rational total = 0;
  for_each_atom(
      mu,
      [&]( std::uint64_t index, const rational& m ) {
        if ( g.at( index ) )
        {
          total += m;
        }
      },
      cap );
  return total;
}

explicit_measure to_explicit( const measure& mu, int cap )
{
  if ( const auto* e = std::get_if<explicit_measure>( &mu.representation() ) )
  {
    return *e;
  }
  explicit_measure out{ mu.arity(), {} };
  for_each_atom(
      mu,
      [&]( std::uint64_t index, const rational& m ) {
        if ( sgn( m ) != 0 )
        {
          out.mass.emplace( index, m );
        }
      },
      cap );
  return out;
}

std::vector<bitvec> sample( const measure& mu, std::uint64_t seed, std::size_t count )
{
  if ( count < 1 )
  {
    throw error( errc::invalid_input, "sample count must be at least 1" );
  }
  rng g( seed );
  const int n = mu.arity();
  std::vector<bitvec> draws( count, bitvec( n ) );

  std::visit(
      [&]( const auto& r ) {
        using T = std::decay_t<decltype( r )>;
        if constexpr ( std::is_same_v<T, product_measure> )
        {
          std::vector<bernoulli> coins;
          for ( const auto& p : r.p )
          {
            coins.emplace_back( p );
          }
          for ( auto& x : draws )
          {
            for ( int k = 0; k < n; ++k )
            {
              x[k] = coins[k]( g );
            }
          }
        }
        else if constexpr ( std::is_same_v<T, explicit_measure> )
        {
          std::vector<std::uint64_t> atoms;
          std::vector<double> cumulative;
          rational running = 0;
          for ( const auto& [index, m] : r.mass )
          {
            running += m;
            atoms.push_back( index );
            cumulative.push_back( to_double( running ) );
          }
          for ( auto& x : draws )
          {
            const double u = g.uniform();
            auto it = std::upper_bound( cumulative.begin(), cumulative.end(), u );
            const auto pos = std::min<std::size_t>( it - cumulative.begin(), atoms.size() - 1 );
            x = point_of( atoms[pos], n );
          }
        }
        else if constexpr ( std::is_same_v<T, tmixture_measure> )
        {
          const double eps = to_double( r.eps );
          for ( auto& x : draws )
          {
            const double t = eps + ( 1.0 - eps ) * g.uniform();
            for ( int k = 0; k < n; ++k )
            {
              x[k] = g.uniform() < t;
            }
          }
        }
        else if constexpr ( std::is_same_v<T, all_same_measure> )
        {
          const bernoulli coin( r.p );
          for ( auto& x : draws )
          {
            std::fill( x.begin(), x.end(), coin( g ) ? 1 : 0 );
          }
        }
        else
        {
          ising::tree_sampler sampler( { r.depth, r.eps, r.delta } );
          bitvec spins( n );
          for ( auto& x : draws )
          {
            sampler.draw( g, spins, x );
          }
        }
      },
      mu.representation() );
  return draws;
}

bool is_fkg( const measure& mu, int cap )
{
  if ( !is_enumerable( mu ) )
  {
    throw error( errc::unsupported, "lattice condition needs an enumerable measure" );
  }
  if ( 2 * mu.arity() > cap )
  {
    throw error( errc::too_large, "pairwise lattice check on " + std::to_string( mu.arity() ) +
                                      " coordinates exceeds cap/2" );
  }
  const auto e = to_explicit( mu, cap );
  auto mass = [&]( std::uint64_t index ) -> rational {
    auto it = e.mass.find( index );
    return it == e.mass.end() ? rational( 0 ) : it->second;
  };
  // Pairs with a zero-mass member satisfy the condition trivially.
  for ( auto i = e.mass.begin(); i != e.mass.end(); ++i )
  {
    for ( auto j = std::next( i ); j != e.mass.end(); ++j )
    {
      const auto x = i->first, y = j->first;
      if ( ( x & y ) == x || ( x & y ) == y )
      {
        continue;
      }
      if ( i->second * j->second > mass( x | y ) * mass( x & y ) )
      {
        return false;
      }
    }
  }
  return true;
}

} // namespace wmaj
