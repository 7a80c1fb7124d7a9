#pragma once

#include "wmaj/boolfn.hpp"
#include "wmaj/lp.hpp"
#include "wmaj/measure.hpp"
#include "wmaj/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace wmaj
{

/*! Default variable limit for classification (zero-set enumeration). */
inline constexpr int classify_cap = 14;

/*! \brief Hypergraph on [n] whose edges are the sets S with f(x_S) = 0.

  Each edge is stored as the canonical index of x_S.
*/
struct zero_hypergraph
{
  int n = 0;
  std::vector<std::uint64_t> edges;
};

/*! Enumerates the zero-sets of a monotone anti-symmetric f. Throws TooLarge,
    NotMonotone, or NotAntisymmetric. */
zero_hypergraph zero_hypergraph_of( const bool_fn& f, int cap = classify_cap );

/*! \brief Fractional cover number of the zero-set hypergraph.

  The covering program minimizes sum_S nu(S) subject to nu >= 0 and
  sum_{S containing k} nu(S) >= 1 for every k. Its dual maximizes sum_i w_i
  subject to w >= 0 and sum_{i in S} w_i <= 1 for every edge S.
*/
struct cover_number
{
  /*! Empty when the covering program is infeasible (tau* is infinite). */
  std::optional<rational> value;
  /*! Optimal nu, one entry per edge (empty when infinite). */
  std::vector<rational> cover;
  /*! Optimal dual weights, one per variable (empty when infinite). */
  std::vector<rational> weights;
  lp::linear_program program;
  lp::solution solution;

  bool infinite() const { return !value.has_value(); }
  /*! tau* >= 2, counting infinity. */
  bool at_least_two() const { return !value || *value >= 2; }
};

cover_number tau_star( const zero_hypergraph& h );

/*! \brief Measure supported on zero-sets with every marginal at least 1/tau*.

  Requires tau* < 2; throws NotApplicable otherwise. The returned measure is
  re-verified exactly: total mass 1, mu[f] = 0 and min_k mu[X_k] >= 1/tau* > 1/2.
*/
explicit_measure adversarial_measure( const bool_fn& f, int cap = classify_cap );

struct weight_certificate
{
  std::vector<rational> weights;
  tie_table ties;
  /*! Number of perturbation halvings used (0 when unperturbed). */
  int halvings = 0;
};

/*! \brief Weights realizing f as a weighted majority.

  From the optimal dual weights w of the covering program: when tau* > 2
  the weights are perturbed by eta 2^-i with eta = 1/(4 n W) halved until
  the realization verifies (at most 64 times); when tau* = 2 they are used
  as is with ties read off the truth table; when tau* is infinite the
  feasibility program of `wm_oracle` supplies them. Throws NotApplicable
  when tau* < 2 and VerificationFailed if no candidate reproduces f.
*/
weight_certificate extract_weights( const bool_fn& f, int cap = classify_cap );

/*! \brief Independent weighted-majority test.

  Solves for w >= 0 with sum w = 1 and sum_i w_i (2 x_i - 1) >= 0 at every
  minimal x with f(x) = 1. By anti-symmetry and monotonicity this covers all
  constraints of the definition. Returns the weights when feasible.
*/
std::optional<std::vector<rational>> wm_oracle_weights( const bool_fn& f, int cap = default_enumeration_cap );
bool wm_oracle( const bool_fn& f, int cap = default_enumeration_cap );

/*! A permutation of {0..n-1}; acts on points by (sigma x)_i = x_{sigma(i)}. */
using permutation = std::vector<int>;

/*! \brief Uniform measure on the orbit of x under the group generated by
    `generators`.

  Checks that the group is transitive (NotTransitive), that f is invariant
  under every generator on all inputs (NotInvariant), and that f(x) = 0
  with |x| > n/2 (BadSeedVector).
*/
explicit_measure orbit_measure( const bool_fn& f, std::span<const permutation> generators, std::span<const std::uint8_t> x,
                                int cap = default_enumeration_cap );

/*! Generators of the automorphism group of the k-ary tree of the given
    depth, acting on its k^levels leaves. */
std::vector<permutation> tree_symmetries( int k, int levels );

/*! The cyclic shift i -> i+1 mod n. */
permutation cyclic_shift( int n );

struct adversarial_witness
{
  explicit_measure mu;
  /*! Variables k with mu[X_k = 0] = 0, where the effect conditions on a
      null event; the effect is reported as 0 for every variable. */
  std::vector<int> null_conditioning;
};

struct classify_result
{
  cover_number tau;
  std::variant<weight_certificate, adversarial_witness> verdict;

  bool is_weighted_majority() const { return std::holds_alternative<weight_certificate>( verdict ); }
};

/*! Runs the dichotomy: checks monotonicity and anti-symmetry, computes tau*,
    and returns either a weight certificate or an adversarial witness. */
classify_result classify( const bool_fn& f, int cap = classify_cap );

} // namespace wmaj
