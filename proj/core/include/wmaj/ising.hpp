#pragma once

#include "wmaj/measure.hpp"
#include "wmaj/rational.hpp"
#include "wmaj/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace wmaj::ising
{

/*! \brief Ternary-tree broadcast parameters.

  depth r >= 1 (3^r leaves), flip probability eps in [0, 1/2), leaf
  resampling probability delta in [0, 1). The copy probability per edge is
  theta = 1 - 2 eps.
*/
struct tree_params
{
  int depth = 1;
  rational eps;
  rational delta;

  int leaves() const;
  rational theta() const { return 1 - 2 * eps; }
  /*! eps == delta <= 1/100, where the root-level ceiling is claimed. */
  bool in_ceiling_regime() const;
  /*! Throws InvalidParams on violation. */
  void validate() const;
};

/*! Conditional probabilities per height k = 0..r:
    a[k] = P(m_v = 0 | y_v = 0), b[k] = P(m_v = 0 | y_v = 1). */
struct bp_state
{
  std::vector<rational> a;
  std::vector<rational> b;
};

/*! Depths up to this limit are computed in exact rational arithmetic. */
inline constexpr int exact_depth_limit = 12;

struct bp_result
{
  rational mu_m; // P(m = 1)
  bp_state state;
  bool exact = true;
  /*! Absolute error bound on every reported value; 0 when exact. */
  double error_bound = 0.0;
};

/*! \brief Level recursion for the law of the recursive majority of the leaves.

  Children of a vertex are conditionally independent given its spin, so
  with c0 = (1-eps) a + eps b and c1 = (1-eps) b + eps a the next level is
  a' = c0^3 + 3 c0^2 (1-c0) and b' likewise from c1. Beyond
  `exact_depth_limit` the pair is rounded to multiples of 2^-160 after every
  level and `error_bound` reports the accumulated worst case.
*/
bp_result bp_exact( const tree_params& tp );

struct claim1_report
{
  rational h;             // (1-eps)^3 (3 - 2 (1-eps)^2)
  bool h_at_least_one = false;
  std::vector<rational> root0_majority0; // a[k] for k = 0..r
  bool conditional_ok = false;           // a[k] >= 1 - delta for all k
  rational mu_m;
  rational ceiling;                      // 1/2 + delta/2
  bool ceiling_ok = false;
};

/*! Checks the sufficient condition h(eps) >= 1 together with the exact
    recursion. Throws OutOfRegime unless eps == delta <= 1/100. */
claim1_report claim1_margin( const tree_params& tp );

/*! Draws one configuration: spins y of the leaves under broadcast, and votes
    x obtained by resampling each leaf to 1 with probability delta. */
class tree_sampler
{
public:
  explicit tree_sampler( const tree_params& tp );

  void draw( rng& g, std::span<std::uint8_t> spins, std::span<std::uint8_t> votes );
  int leaves() const { return leaves_; }

private:
  int depth_;
  int leaves_;
  bernoulli flip_;
  bernoulli resample_;
  std::vector<std::uint8_t> level_;
  std::vector<std::uint8_t> next_;
};

/*! RM_{3,r} of a leaf vector of length 3^r; `scratch` is reused storage. */
bool recursive_majority3( std::span<const std::uint8_t> leaves, std::vector<std::uint8_t>& scratch );

struct mc_options
{
  /*! Fixed batch schedule; results depend only on (seed, batches). */
  std::size_t batches = 16;
  /*! Worker threads; 0 picks the hardware concurrency. */
  unsigned threads = 0;
};

struct mc_estimate
{
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/*! Monte Carlo estimate of P(m = 1) with its binomial standard error. */
mc_estimate mc_mu_m( const tree_params& tp, std::uint64_t samples, std::uint64_t seed, const mc_options& opts = {} );

struct effect_estimate
{
  /*! E[m | x_i = 1] - E[m | x_i = 0], conditioning on the recorded vote. */
  mc_estimate vote_conditioned;
  /*! E[m | y_i = 1] - E[m | y_i = 0], conditioning on the leaf spin. */
  mc_estimate spin_conditioned;
};

/*! Stratified two-sample estimators of a leaf's effect. Throws
    DegenerateStratum when a conditioning value never occurs. */
effect_estimate mc_effect( const tree_params& tp, int leaf, std::uint64_t samples, std::uint64_t seed,
                           const mc_options& opts = {} );

struct claim2_bounds
{
  double stated = 0.0;     // (1-eps/2)^((r-1)/2) + 2^-((r-1)/2)
  double proof_form = 0.0; // (1-2 eps)^((r-1)/2) + 2^-((r-1)/2)
};

claim2_bounds claim2_bound( int r, double eps );

/*! Exact leaf distribution by enumerating every spin configuration of the
    tree; depth at most 2. */
explicit_measure leaf_measure( const tree_params& tp );

} // namespace wmaj::ising
