#include "wmaj/boolfn.hpp"

#include "wmaj/error.hpp"

#include <numeric>

namespace wmaj
{

std::uint64_t index_of( std::span<const std::uint8_t> x )
{
  if ( x.size() > 63 )
  {
    throw error( errc::too_large, "canonical index needs at most 63 coordinates, got " + std::to_string( x.size() ) );
  }
  std::uint64_t index = 0;
  for ( auto b : x )
  {
    index = ( index << 1 ) | ( b ? 1u : 0u );
  }
  return index;
}

bitvec point_of( std::uint64_t index, int n )
{
  bitvec x( n );
  for ( int k = 0; k < n; ++k )
  {
    x[k] = bit_at( index, n, k );
  }
  return x;
}

std::string to_bitstring( std::span<const std::uint8_t> x )
{
  std::string s;
  s.reserve( x.size() );
  for ( auto b : x )
  {
    s.push_back( b ? '1' : '0' );
  }
  return s;
}

bitvec parse_bitstring( std::string_view text )
{
  bitvec x;
  x.reserve( text.size() );
  for ( char c : text )
  {
    if ( c != '0' && c != '1' )
    {
      throw error( errc::parse_error, "bitstring may contain only 0 and 1: '" + std::string( text ) + "'" );
    }
    x.push_back( c == '1' );
  }
  return x;
}

namespace
{

int weighted_sign( const weighted_majority_repr& w, std::span<const std::uint8_t> x )
{
  integer total = 0;
  for ( std::size_t i = 0; i < x.size(); ++i )
  {
    if ( x[i] )
    {
      total += w.scaled[i];
    }
    else
    {
      total -= w.scaled[i];
    }
  }
  return sgn( total );
}

bool eval_weighted( const weighted_majority_repr& w, std::span<const std::uint8_t> x )
{
  const int s = weighted_sign( w, x );
  if ( s != 0 )
  {
    return s > 0;
  }
  auto it = w.ties.find( bitvec( x.begin(), x.end() ) );
  if ( it == w.ties.end() )
  {
    throw error( errc::unresolved_tie, "weighted sum is zero at " + to_bitstring( x ) + " and no tie value is given" );
  }
  return it->second;
}

bool eval_recursive( int k, int levels, std::span<const std::uint8_t> x )
{
  if ( levels == 0 )
  {
    return x[0] != 0;
  }
  const auto block = x.size() / k;
  int ones = 0;
  for ( int b = 0; b < k; ++b )
  {
    ones += eval_recursive( k, levels - 1, x.subspan( b * block, block ) );
  }
  return 2 * ones > k;
}

int int_pow( int base, int exponent )
{
  long long result = 1;
  for ( int i = 0; i < exponent; ++i )
  {
    result *= base;
    if ( result > ( 1ll << 30 ) )
    {
      throw error( errc::too_large, "recursive majority has more than 2^30 variables" );
    }
  }
  return static_cast<int>( result );
}

} // namespace

bool_fn::bool_fn( repr r, int arity )
    : repr_( std::make_shared<const repr>( std::move( r ) ) ), arity_( arity )
{
}

bool_fn bool_fn::truth_table( int n, std::vector<bool> bits )
{
  if ( n < 1 )
  {
    throw error( errc::invalid_input, "truth table needs n >= 1" );
  }
  if ( n > 40 )
  {
    throw error( errc::too_large, "truth table with " + std::to_string( n ) + " variables" );
  }
  if ( bits.size() != ( std::size_t{ 1 } << n ) )
  {
    throw error( errc::length_mismatch, "truth table for n=" + std::to_string( n ) + " needs " +
                                            std::to_string( std::size_t{ 1 } << n ) + " bits, got " +
                                            std::to_string( bits.size() ) );
  }
  return bool_fn( truth_table_repr{ n, std::move( bits ) }, n );
}

bool_fn bool_fn::weighted_majority( std::vector<rational> weights, tie_table ties )
{
  if ( weights.empty() )
  {
    throw error( errc::invalid_input, "weighted majority needs at least one weight" );
  }
  bool positive = false;
  integer common = 1;
  for ( std::size_t i = 0; i < weights.size(); ++i )
  {
    if ( sgn( weights[i] ) < 0 )
    {
      throw error( errc::invalid_input, "weight " + std::to_string( i + 1 ) + " is negative" );
    }
    positive |= sgn( weights[i] ) > 0;
    mpz_lcm( common.get_mpz_t(), common.get_mpz_t(), weights[i].get_den_mpz_t() );
  }
  if ( !positive )
  {
    throw error( errc::invalid_input, "weights are all zero" );
  }

  weighted_majority_repr r;
  r.weights = std::move( weights );
  for ( const auto& w : r.weights )
  {
    r.scaled.emplace_back( w.get_num() * ( common / w.get_den() ) );
  }
  const int n = static_cast<int>( r.weights.size() );
  for ( const auto& [x, value] : ties )
  {
    if ( static_cast<int>( x.size() ) != n )
    {
      throw error( errc::length_mismatch, "tie entry " + to_bitstring( x ) + " has wrong length" );
    }
    if ( weighted_sign( r, x ) != 0 )
    {
      throw error( errc::invalid_input, "tie entry " + to_bitstring( x ) + " is not a tie input" );
    }
  }
  r.ties = std::move( ties );
  return bool_fn( std::move( r ), n );
}

bool_fn bool_fn::recursive_majority( int k, int levels )
{
  if ( k < 3 || k % 2 == 0 )
  {
    throw error( errc::invalid_input, "recursive majority needs odd k >= 3, got " + std::to_string( k ) );
  }
  if ( levels < 1 )
  {
    throw error( errc::invalid_input, "recursive majority needs at least one level" );
  }
  return bool_fn( recursive_majority_repr{ k, levels }, int_pow( k, levels ) );
}

bool_fn bool_fn::composed( bool_fn outer, std::vector<bool_fn> inners )
{
  if ( static_cast<int>( inners.size() ) != outer.arity() )
  {
    throw error( errc::length_mismatch, "outer function takes " + std::to_string( outer.arity() ) +
                                            " inputs but " + std::to_string( inners.size() ) + " inner functions were given" );
  }
  int n = 0;
  for ( const auto& g : inners )
  {
    n += g.arity();
  }
  return bool_fn( composed_repr{ std::make_shared<const bool_fn>( std::move( outer ) ), std::move( inners ) }, n );
}

bool_fn bool_fn::majority( int n )
{
  if ( n < 1 || n % 2 == 0 )
  {
    throw error( errc::invalid_input, "simple majority needs an odd number of voters" );
  }
  return weighted_majority( std::vector<rational>( n, rational( 1 ) ) );
}

bool_fn bool_fn::dictator( int n, int k )
{
  if ( k < 0 || k >= n )
  {
    throw error( errc::index_out_of_range, "dictator index " + std::to_string( k ) );
  }
  std::vector<rational> w( n, rational( 0 ) );
  w[k] = 1;
  return weighted_majority( std::move( w ) );
}

std::string bool_fn::kind() const
{
  switch ( repr_->index() )
  {
  case 0: return "truth_table";
  case 1: return "weighted_majority";
  case 2: return "recursive_majority";
  default: return "composed";
  }
}

bool bool_fn::operator()( std::span<const std::uint8_t> x ) const
{
  if ( static_cast<int>( x.size() ) != arity_ )
  {
    throw error( errc::length_mismatch, "input has " + std::to_string( x.size() ) + " coordinates, function takes " +
                                            std::to_string( arity_ ) );
  }
  return std::visit(
      [&]( const auto& r ) -> bool {
        using T = std::decay_t<decltype( r )>;
        if constexpr ( std::is_same_v<T, truth_table_repr> )
        {
          return r.bits[index_of( x )];
        }
        else if constexpr ( std::is_same_v<T, weighted_majority_repr> )
        {
          return eval_weighted( r, x );
        }
        else if constexpr ( std::is_same_v<T, recursive_majority_repr> )
        {
          return eval_recursive( r.k, r.levels, x );
        }
        else
        {
          bitvec outer_input;
          outer_input.reserve( r.inners.size() );
          std::size_t offset = 0;
          for ( const auto& g : r.inners )
          {
            outer_input.push_back( g( x.subspan( offset, g.arity() ) ) );
            offset += g.arity();
          }
          return ( *r.outer )( outer_input );
        }
      },
      *repr_ );
}

bool bool_fn::at( std::uint64_t index ) const
{
  if ( const auto* tt = std::get_if<truth_table_repr>( repr_.get() ) )
  {
    return tt->bits[index];
  }
  const auto x = point_of( index, arity_ );
  return ( *this )( x );
}

bool evaluate( const bool_fn& f, std::span<const std::uint8_t> x )
{
  return f( x );
}

bool_fn to_truth_table( const bool_fn& f, int cap )
{
  if ( std::holds_alternative<truth_table_repr>( f.representation() ) )
  {
    return f;
  }
  const int n = f.arity();
  if ( n > cap )
  {
    throw error( errc::too_large, "function has " + std::to_string( n ) + " variables, enumeration cap is " +
                                      std::to_string( cap ) );
  }
  const std::uint64_t size = std::uint64_t{ 1 } << n;
  std::vector<bool> bits( size );

  if ( const auto* w = std::get_if<weighted_majority_repr>( &f.representation() ) )
  {
    // Walk the cube in index order, keeping the weighted sum incrementally.
    bitvec x( n, 0 );
    integer total = 0;
    for ( const auto& s : w->scaled )
    {
      total -= s;
    }
    for ( std::uint64_t index = 0; index < size; ++index )
    {
      if ( index > 0 )
      {
        // increment x as a binary counter with x_n least significant
        for ( int k = n - 1; k >= 0; --k )
        {
          if ( x[k] )
          {
            x[k] = 0;
            total -= 2 * w->scaled[k];
          }
          else
          {
            x[k] = 1;
            total += 2 * w->scaled[k];
            break;
          }
        }
      }
      const int s = sgn( total );
      bits[index] = s != 0 ? s > 0 : eval_weighted( *w, x );
    }
  }
  else
  {
    for ( std::uint64_t index = 0; index < size; ++index )
    {
      bits[index] = f.at( index );
    }
  }
  return bool_fn::truth_table( n, std::move( bits ) );
}

const std::vector<bool>& truth_bits( const bool_fn& table )
{
  const auto* tt = std::get_if<truth_table_repr>( &table.representation() );
  if ( !tt )
  {
    throw error( errc::invalid_input, "expected a truth table" );
  }
  return tt->bits;
}

std::vector<bool> truth_bits( bool_fn&& table )
{
  return truth_bits( static_cast<const bool_fn&>( table ) );
}

bool is_monotone( const bool_fn& f, int cap )
{
  const auto table = to_truth_table( f, cap );
  const auto& bits = truth_bits( table );
  const int n = f.arity();
  for ( std::uint64_t x = 0; x < bits.size(); ++x )
  {
    if ( !bits[x] )
    {
      continue;
    }
    // f(x)=1 must imply f(y)=1 for every y covering x
    for ( int k = 0; k < n; ++k )
    {
      const auto m = flip_mask( n, k );
      if ( !( x & m ) && !bits[x | m] )
      {
        return false;
      }
    }
  }
  return true;
}

bool is_antisymmetric( const bool_fn& f, int cap )
{
  const auto table = to_truth_table( f, cap );
  const auto& bits = truth_bits( table );
  const std::uint64_t all = bits.size() - 1;
  for ( std::uint64_t x = 0; x <= all / 2; ++x )
  {
    if ( bits[x] == bits[all ^ x] )
    {
      return false;
    }
  }
  return true;
}

bool is_pivotal( const bool_fn& f, std::span<const std::uint8_t> x, int k )
{
  if ( k < 0 || k >= f.arity() )
  {
    throw error( errc::index_out_of_range, "variable index " + std::to_string( k ) + " for arity " +
                                               std::to_string( f.arity() ) );
  }
  bitvec y( x.begin(), x.end() );
  y[k] = 0;
  const bool low = f( y );
  y[k] = 1;
  return low != f( y );
}

} // namespace wmaj
