#pragma once

#include "wmaj/boolfn.hpp"
#include "wmaj/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace wmaj
{

/*! Independent coordinates with P(X_k = 1) = p[k], each strictly inside (0,1). */
struct product_measure
{
  std::vector<rational> p;
};

/*! Finite support keyed by canonical index; masses sum to exactly 1. */
struct explicit_measure
{
  int n = 0;
  std::map<std::uint64_t, rational> mass;
};

/*! t ~ Uniform[eps, 1], then n i.i.d. Bernoulli(t) coordinates. */
struct tmixture_measure
{
  int n = 0;
  rational eps;
};

/*! All coordinates 1 with probability p, all 0 otherwise. */
struct all_same_measure
{
  int n = 0;
  rational p;
};

/*! Leaves of the depth-r ternary tree under broadcast with flip probability
    eps followed by independent resampling of each leaf to 1 with
    probability delta. */
struct ising_leaves_measure
{
  int depth = 1;
  rational eps;
  rational delta;
};

/*! \brief A probability distribution on {0,1}^n.

  Construction validates the invariants of each kind and throws
  `error(errc::invalid_input)` on violation.
*/
class measure
{
public:
  using repr = std::variant<product_measure, explicit_measure, tmixture_measure, all_same_measure, ising_leaves_measure>;

  static measure product( std::vector<rational> p );
  static measure uniform_product( int n, const rational& p );
  static measure explicit_masses( int n, std::map<std::uint64_t, rational> mass );
  static measure tmixture( int n, const rational& eps );
  static measure all_same( int n, const rational& p );
  static measure ising_leaves( int depth, const rational& eps, const rational& delta );

  int arity() const { return arity_; }
  const repr& representation() const { return repr_; }
  std::string kind() const;
  /*! Short human-readable label, e.g. "product(p=1/2,...)". */
  std::string name() const;

private:
  measure( repr r, int arity ) : repr_( std::move( r ) ), arity_( arity ) {}

  repr repr_;
  int arity_ = 0;
};

/*! Whether the mass function is available by enumeration (everything except
    Ising leaves). */
bool is_enumerable( const measure& mu );

/*! mu(x). Throws Unsupported for Ising leaves and LengthMismatch. */
rational prob_of( const measure& mu, std::span<const std::uint8_t> x );

/*! Calls `visit(index, mass)` for every atom of positive mass. Throws
    TooLarge when a dense measure exceeds `cap` variables. */
void for_each_atom( const measure& mu, const std::function<void( std::uint64_t, const rational& )>& visit,
                    int cap = default_enumeration_cap );

/*! mu[X_k = 1] for 0-based k. */
rational marginal( const measure& mu, int k );

/*! mu[f] exactly. */
rational expect( const measure& mu, const bool_fn& f, int cap = default_enumeration_cap );

/*! Explicit form of an enumerable measure. */
explicit_measure to_explicit( const measure& mu, int cap = default_enumeration_cap );

/*! i.i.d. draws, deterministic for a given seed. See `rng.hpp` for the
    generator contract. */
std::vector<bitvec> sample( const measure& mu, std::uint64_t seed, std::size_t count );

/*! Lattice condition mu(x)mu(y) <= mu(x or y) mu(x and y) for all pairs.
    Accepts any enumerable measure; throws TooLarge beyond cap/2 variables. */
bool is_fkg( const measure& mu, int cap = default_enumeration_cap );

/*! (1/(1-eps)) * integral_eps^1 t^k (1-t)^(n-k) dt, exact. */
rational tmixture_atom( int n, int ones, const rational& eps );

/*! P(majority of n votes is 1) under the t-mixture, n odd, exact. */
rational tmixture_win_prob( int n, const rational& eps );

} // namespace wmaj
