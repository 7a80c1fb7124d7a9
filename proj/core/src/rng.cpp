#include "wmaj/rng.hpp"

#include "wmaj/error.hpp"

namespace wmaj
{

bernoulli::bernoulli( const rational& p )
{
  if ( sgn( p ) < 0 || p > 1 )
  {
    throw error( errc::invalid_input, "Bernoulli parameter outside [0,1]: " + to_string( p ) );
  }
  if ( p == 1 )
  {
    always_ = true;
    return;
  }
  integer scaled = p.get_num();
  scaled <<= 64;
  scaled /= p.get_den();
  threshold_ = 0;
  // scaled < 2^64 here
  mpz_export( &threshold_, nullptr, -1, sizeof threshold_, 0, 0, scaled.get_mpz_t() );
}

std::uint64_t stream_seed( std::uint64_t seed, std::uint64_t stream )
{
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * ( stream + 1 );
  z = ( z ^ ( z >> 30 ) ) * 0xBF58476D1CE4E5B9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94D049BB133111EBull;
  return z ^ ( z >> 31 );
}

} // namespace wmaj
