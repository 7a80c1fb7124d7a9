#pragma once

#include "wmaj/boolfn.hpp"
#include "wmaj/measure.hpp"
#include "wmaj/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wmaj
{

/*! mu{x : variable k is pivotal at x}. Variable indices are 0-based. */
rational influence( const bool_fn& f, const measure& mu, int k, int cap = default_enumeration_cap );

/*! mu[f | X_k = 1] - mu[f | X_k = 0]. Throws DegenerateMarginal when
    mu[X_k = 1] is 0 or 1. */
rational effect( const bool_fn& f, const measure& mu, int k, int cap = default_enumeration_cap );

/*! Cov_mu[f, X_k]; equals p_k (1 - p_k) effect_k. Same preconditions as
    `effect`. */
rational covariance( const bool_fn& f, const measure& mu, int k, int cap = default_enumeration_cap );

/*! Influences under the uniform product measure. */
std::vector<rational> banzhaf( const bool_fn& f, int cap = default_enumeration_cap );

/*! \brief Shapley-Shubik index via Owen's integral of the influence at the
    product measure mu_p over p in [0,1].

  For each k the influence is a polynomial in p whose coefficients count the
  points where k is pivotal by Hamming weight of the other coordinates;
  integrating term by term gives sum_j c_j j! (n-1-j)! / n!.
*/
std::vector<rational> shapley_shubik( const bool_fn& f, int cap = default_enumeration_cap );

/*! Shapley-Shubik index by enumerating all n! arrival orders and crediting
    the voter that turns the outcome to 1. Limited to n <= 10. */
std::vector<rational> shapley_shubik_orders( const bool_fn& f );

struct variable_power
{
  int k = 0; // 0-based
  rational marginal;
  rational influence;
  /*! Empty when the marginal is 0 or 1 and the effect is undefined. */
  std::optional<rational> effect;
};

struct power_report
{
  std::string function_name;
  std::string measure_name;
  std::vector<variable_power> rows;
  std::optional<std::vector<rational>> banzhaf;
  std::optional<std::vector<rational>> shapley_shubik;
};

struct power_options
{
  bool banzhaf = false;
  bool shapley_shubik = false;
  int cap = default_enumeration_cap;
};

power_report make_power_report( const bool_fn& f, const measure& mu, const power_options& opts = {} );

} // namespace wmaj
