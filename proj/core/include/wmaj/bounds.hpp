#pragma once

#include "wmaj/boolfn.hpp"
#include "wmaj/lp.hpp"
#include "wmaj/measure.hpp"
#include "wmaj/rational.hpp"

#include <vector>

namespace wmaj
{

/*! \brief Parameters shared by both aggregation bounds.

  p is the weighted mean marginal, q the threshold fraction and delta the
  normalized effect budget. Valid when 0 < q < p < 1 and delta >= 0.
*/
struct bound_input
{
  rational p;
  rational q;
  rational delta;

  /*! Throws InvalidInput naming the offending field. */
  void validate() const;
};

/*! max(0, 1 - delta p (1-p) / (p-q)). */
rational bound_prob( const bound_input& in );

/*! \brief The two-branch bound.

  (p-q)/(1-q) when delta >= (p-q)/(p(1-q)), otherwise
  max{delta p, 1 - delta p (1-p)/(p-q)}; clamped to [0,1].
*/
rational bound_lin( const bound_input& in );

/*! delta at which `bound_lin` switches branch: (p-q)/(p(1-q)). */
rational branch_point( const rational& p, const rational& q );

struct tightness_report
{
  /*! Exact minimum of A over the (A, B) program with q = r/n, q' = (r+1)/n. */
  rational lp_min;
  rational lp_b;
  /*! bound_lin at the continuum q passed by the caller. */
  rational closed_form;
  /*! bound_lin at q = r/n. */
  rational closed_form_discrete;
  /*! Symmetric witness: a[i] is the mass on Hamming weight i, i = 0..n. */
  std::vector<rational> witness;
  lp::solution solution;
};

/*! \brief Solves the (A, B) program for a symmetric r-threshold function on
    n voters and rebuilds a symmetric measure attaining the minimum.

  Minimizes A subject to 0 <= A <= 1, q'A <= B <= A, 0 <= p - B <= q(1-A)
  and B - pA <= delta p (1-p), with q = r/n and q' = (r+1)/n. The witness
  puts the mass A on weights r+1 and n and 1-A on weights 0 and r with the
  matching means, and is re-checked against the original constraints.
  Requires 0 <= r < n, p < 1, delta >= 0 and p > q'; throws InvalidInput
  otherwise and VerificationFailed if the witness does not check.
*/
tightness_report verify_tightness( const rational& p, const rational& q, const rational& delta, int n, int r );

struct lemma1_report
{
  rational p;
  rational q;
  /*! Smallest delta meeting the effect condition with equality. */
  rational delta;
  rational mu_f;
  rational bound_prob;
  rational bound_lin;
  /*! (p-q) W (1 - mu[f]). */
  rational g1_lower;
  /*! mu[(sum_i w_i Y_i) g] with Y_i = p_i - X_i and g = 1 - f, enumerated. */
  rational middle;
  /*! sum_i w_i Cov[f, X_i]. */
  rational covariance_sum;
  /*! p (1-p) delta W. */
  rational g2_upper;
};

/*! \brief Checks the probabilistic bound on one instance.

  f must satisfy f = 1 where sum_i (x_i - q) w_i > 0 and f = 0 where it is
  negative (InvalidInput otherwise). Computes p and delta from mu, the exact
  mu[f], both bounds and the two intermediate inequalities, and throws
  VerificationFailed if any inequality of the chain fails. Throws
  HypothesisViolated when p <= q, Unsupported for non-enumerable mu.
*/
lemma1_report check_lemma1_on_instance( const std::vector<rational>& weights, const rational& q, const bool_fn& f,
                                        const measure& mu, int cap = default_enumeration_cap );

/*! Weighted-majority overload with its own weights and q = 1/2 by default. */
lemma1_report check_lemma1_on_instance( const bool_fn& f, const measure& mu, const rational& q = rational( 1, 2 ),
                                        int cap = default_enumeration_cap );

/*! f(x) = 1 iff sum_i (x_i - q) w_i > 0, with ties mapped to `tie_value`. */
bool_fn threshold_function( const std::vector<rational>& weights, const rational& q, bool tie_value = false );

struct duplicated_instance
{
  /*! Copies of variable i occupy a contiguous block of w_i positions. */
  std::vector<int> block_start;
  /*! Simple majority on the W copies: strict sides by sum vs W/2, ties
      taken from f on coupled points and 0 elsewhere. */
  bool_fn g;
  /*! Coupled measure: all copies of a variable agree. */
  measure nu;
};

/*! \brief Replaces variable i by w_i identical copies.

  f must be a weighted majority whose weights are positive integers;
  the total W is limited by `cap`. mu must be enumerable on n variables.
*/
duplicated_instance duplicate_by_weight( const bool_fn& f, const measure& mu, int cap = default_enumeration_cap );

} // namespace wmaj
