#pragma once

#include "wmaj/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace wmaj
{

/*! A point of {0,1}^n, one byte per coordinate (0 or 1). Coordinate 0 is
    the first variable x_1. */
using bitvec = std::vector<std::uint8_t>;

/*! Default number of variables beyond which exhaustive operations refuse. */
inline constexpr int default_enumeration_cap = 24;

/*! \name Canonical indexing

  A point x maps to the integer sum_i x_i 2^(n-1-i), so x_1 is the most
  significant bit. Truth tables, files, and zero-sets all use this order.
*/
/*!@{*/
std::uint64_t index_of( std::span<const std::uint8_t> x );
bitvec point_of( std::uint64_t index, int n );
inline bool bit_at( std::uint64_t index, int n, int k )
{
  return ( index >> ( n - 1 - k ) ) & 1u;
}
inline std::uint64_t flip_mask( int n, int k )
{
  return std::uint64_t{ 1 } << ( n - 1 - k );
}
/*! "x_1 x_2 ... x_n" as an ASCII 0/1 string. */
std::string to_bitstring( std::span<const std::uint8_t> x );
bitvec parse_bitstring( std::string_view text );
/*!@}*/

/*! Explicit values of a weighted majority on inputs where the weighted sum
    is exactly zero. */
using tie_table = std::map<bitvec, bool>;

class bool_fn;

struct truth_table_repr
{
  int n = 0;
  std::vector<bool> bits;
};

struct weighted_majority_repr
{
  std::vector<rational> weights;
  tie_table ties;
  // weights scaled to a common denominator; sign of sum_i w_i (2x_i - 1)
  // is computed on these
  std::vector<integer> scaled;
};

struct recursive_majority_repr
{
  int k = 3;
  int levels = 1;
};

struct composed_repr
{
  std::shared_ptr<const bool_fn> outer;
  std::vector<bool_fn> inners;
};

/*! \brief An immutable Boolean function in one of four representations.

  Values are cheap to copy and safe to evaluate concurrently.
*/
class bool_fn
{
public:
  using repr = std::variant<truth_table_repr, weighted_majority_repr, recursive_majority_repr, composed_repr>;

  static bool_fn truth_table( int n, std::vector<bool> bits );
  static bool_fn weighted_majority( std::vector<rational> weights, tie_table ties = {} );
  static bool_fn recursive_majority( int k, int levels );
  /*! Inner functions act on consecutive disjoint blocks of the inputs. */
  static bool_fn composed( bool_fn outer, std::vector<bool_fn> inners );

  /*! Unit-weight majority on an odd number of variables. */
  static bool_fn majority( int n );
  /*! f(x) = x_k on n variables (k is 0-based). */
  static bool_fn dictator( int n, int k );

  int arity() const { return arity_; }
  const repr& representation() const { return *repr_; }
  std::string kind() const;

  /*! Evaluates f(x). Throws LengthMismatch or UnresolvedTie. */
  bool operator()( std::span<const std::uint8_t> x ) const;
  /*! Evaluates f at the point with canonical index `index` (n <= 63). */
  bool at( std::uint64_t index ) const;

private:
  bool_fn( repr r, int arity );

  std::shared_ptr<const repr> repr_;
  int arity_ = 0;
};

bool evaluate( const bool_fn& f, std::span<const std::uint8_t> x );

/*! Truth-table form of f; returns f itself for truth-table input. Throws
    TooLarge when arity exceeds `cap`. */
bool_fn to_truth_table( const bool_fn& f, int cap = default_enumeration_cap );

/*! Bits of the truth table of f in canonical order. */
const std::vector<bool>& truth_bits( const bool_fn& table );
/*! Copying overload so that `truth_bits( to_truth_table( f ) )` is safe. */
std::vector<bool> truth_bits( bool_fn&& table );

bool is_monotone( const bool_fn& f, int cap = default_enumeration_cap );
bool is_antisymmetric( const bool_fn& f, int cap = default_enumeration_cap );

/*! Whether variable k (0-based) is pivotal at x. */
bool is_pivotal( const bool_fn& f, std::span<const std::uint8_t> x, int k );

} // namespace wmaj
