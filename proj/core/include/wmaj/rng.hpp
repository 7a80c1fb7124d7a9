#pragma once

#include "wmaj/rational.hpp"

#include <cstdint>
#include <random>

namespace wmaj
{

/*! \brief Seedable random source used by every sampler in the library.

  The engine is `std::mt19937_64`, whose output sequence for a given seed is
  fixed by the C++ standard. All derived quantities (uniform doubles and
  Bernoulli draws) are computed here from raw 64-bit outputs rather than via
  `<random>` distributions, whose algorithms are implementation-defined. The
  same seed therefore yields the same draws on every conforming toolchain.
*/
class rng
{
public:
  explicit rng( std::uint64_t seed ) : engine_( seed ) {}

  std::uint64_t next() { return engine_(); }

  /*! Uniform on [0,1) with 53 random bits. */
  double uniform() { return static_cast<double>( next() >> 11 ) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

/*! Bernoulli(p) as a comparison of one raw draw against floor(p * 2^64). */
class bernoulli
{
public:
  bernoulli() = default;
  explicit bernoulli( const rational& p );

  bool operator()( rng& g ) const { return always_ || g.next() < threshold_; }

private:
  std::uint64_t threshold_ = 0;
  bool always_ = false;
};

/*! SplitMix64 mix of (seed, stream); seeds independent per-batch engines. */
std::uint64_t stream_seed( std::uint64_t seed, std::uint64_t stream );

} // namespace wmaj
