#pragma once

#include "wmaj/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wmaj::lp
{

enum class relation
{
  less_equal,
  equal,
  greater_equal
};

enum class sense
{
  minimize,
  maximize
};

struct constraint
{
  std::vector<rational> row;
  relation rel = relation::less_equal;
  rational rhs;
};

/*! \brief A linear program over variables x >= 0 with optional upper bounds.

  `upper` is either empty or has one entry per variable.
*/
struct linear_program
{
  sense direction = sense::minimize;
  std::vector<rational> objective;
  std::vector<constraint> constraints;
  std::vector<std::optional<rational>> upper;

  std::size_t num_variables() const { return objective.size(); }
};

enum class status
{
  optimal,
  infeasible,
  unbounded
};

/*! \brief Result of `solve`.

  For an optimal solution `dual` holds one multiplier per constraint in the
  caller's order, followed by one multiplier per finite upper bound (in
  variable order). Sign convention: with y the duals and b the right-hand
  sides, the objective value equals b.y exactly. For a minimization, y_i >= 0
  on >= rows and y_i <= 0 on <= rows; for a maximization the signs swap.
  Upper-bound rows behave as <= rows.

  For an unbounded program `primal` is a feasible point and `ray` a direction
  along which the objective improves without limit.
*/
struct solution
{
  lp::status status = status::infeasible;
  rational value;
  std::vector<rational> primal;
  std::vector<rational> dual;
  std::vector<rational> ray;
  std::size_t pivots = 0;
};

/*! Exact two-phase dense tableau simplex with Bland's rule. Throws
    `error(errc::malformed_lp)` if row or bound lengths disagree. */
solution solve( const linear_program& program );

/*! Independently re-checks an optimal solution: primal feasibility, dual
    feasibility and sign conventions, and equality of objectives. */
bool verify( const linear_program& program, const solution& sol );

/*! Human-readable exact dump of a program. */
std::string dump( const linear_program& program );

std::string to_string( status s );

} // namespace wmaj::lp
