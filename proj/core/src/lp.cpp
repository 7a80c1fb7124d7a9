#include "wmaj/lp.hpp"

#include "wmaj/error.hpp"

#include <sstream>

namespace wmaj::lp
{

namespace
{

struct row_spec
{
  std::vector<rational> coeffs;
  relation rel;
  rational rhs;
};

/* Dense tableau in the form  T x = rhs  with an explicit basis and a
   reduced-cost row. Columns are laid out as
   [structural | slack/surplus | artificial]. */
class tableau
{
public:
  tableau( const std::vector<row_spec>& rows, std::size_t structural )
      : structural_( structural )
  {
    const auto m = rows.size();
    std::size_t inequalities = 0, artificials = 0;
    for ( const auto& r : rows )
    {
      inequalities += r.rel != relation::equal;
      artificials += r.rel != relation::less_equal;
    }
    first_slack_ = structural;
    first_artificial_ = structural + inequalities;
    cols_ = first_artificial_ + artificials;

    coeffs_.assign( m, std::vector<rational>( cols_ ) );
    rhs_.resize( m );
    basis_.resize( m );
    identity_.resize( m );

    auto next_slack = first_slack_;
    auto next_artificial = first_artificial_;
    for ( std::size_t i = 0; i < m; ++i )
    {
      for ( std::size_t j = 0; j < structural; ++j )
      {
        coeffs_[i][j] = rows[i].coeffs[j];
      }
      rhs_[i] = rows[i].rhs;
      switch ( rows[i].rel )
      {
      case relation::less_equal:
        coeffs_[i][next_slack] = 1;
        identity_[i] = next_slack++;
        break;
      case relation::greater_equal:
        coeffs_[i][next_slack++] = -1;
        coeffs_[i][next_artificial] = 1;
        identity_[i] = next_artificial++;
        break;
      case relation::equal:
        coeffs_[i][next_artificial] = 1;
        identity_[i] = next_artificial++;
        break;
      }
      basis_[i] = identity_[i];
    }
  }

  bool is_artificial( std::size_t j ) const { return j >= first_artificial_; }
  std::size_t rows() const { return rhs_.size(); }
  std::size_t cols() const { return cols_; }

  /* Installs cost vector `c` (one entry per column) and recomputes the
     reduced costs for the current basis. */
  void set_costs( const std::vector<rational>& c )
  {
    costs_ = c;
    reduced_ = c;
    objective_ = 0;
    for ( std::size_t i = 0; i < rows(); ++i )
    {
      const auto& cb = c[basis_[i]];
      if ( sgn( cb ) == 0 )
      {
        continue;
      }
      for ( std::size_t j = 0; j < cols_; ++j )
      {
        if ( sgn( coeffs_[i][j] ) != 0 )
        {
          reduced_[j] -= cb * coeffs_[i][j];
        }
      }
      objective_ += cb * rhs_[i];
    }
  }

  enum class outcome
  {
    optimal,
    unbounded
  };

  /* Minimizes the installed costs with Bland's rule. Artificial columns never
     enter when `allow_artificial` is false. On unboundedness `entering_`
     holds the improving column. */
  outcome run( bool allow_artificial )
  {
    for ( ;; )
    {
      std::size_t entering = cols_;
      for ( std::size_t j = 0; j < cols_; ++j )
      {
        if ( !allow_artificial && is_artificial( j ) )
        {
          continue;
        }
        if ( sgn( reduced_[j] ) < 0 )
        {
          entering = j;
          break;
        }
      }
      if ( entering == cols_ )
      {
        return outcome::optimal;
      }

      std::size_t leaving = rows();
      rational best_ratio;
      for ( std::size_t i = 0; i < rows(); ++i )
      {
        if ( sgn( coeffs_[i][entering] ) <= 0 )
        {
          continue;
        }
        rational ratio = rhs_[i] / coeffs_[i][entering];
        if ( leaving == rows() || ratio < best_ratio ||
             ( ratio == best_ratio && basis_[i] < basis_[leaving] ) )
        {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if ( leaving == rows() )
      {
        entering_ = entering;
        return outcome::unbounded;
      }
      pivot( leaving, entering );
    }
  }

  void pivot( std::size_t r, std::size_t c )
  {
    ++pivots_;
    auto& prow = coeffs_[r];
    const rational inv = 1 / prow[c];
    std::vector<std::size_t> nonzero;
    for ( std::size_t j = 0; j < cols_; ++j )
    {
      if ( sgn( prow[j] ) != 0 )
      {
        prow[j] *= inv;
        nonzero.push_back( j );
      }
    }
    rhs_[r] *= inv;

    auto eliminate = [&]( std::vector<rational>& row, rational& rhs ) {
      if ( sgn( row[c] ) == 0 )
      {
        return;
      }
      const rational factor = row[c];
      for ( auto j : nonzero )
      {
        row[j] -= factor * prow[j];
      }
      rhs -= factor * rhs_[r];
    };
    for ( std::size_t i = 0; i < rows(); ++i )
    {
      if ( i != r )
      {
        eliminate( coeffs_[i], rhs_[i] );
      }
    }
    // The reduced-cost row stores c_j - c_B B^-1 A_j and the negated
    // objective sits in the rhs slot, so the same elimination applies.
    rational neg_objective = -objective_;
    eliminate( reduced_, neg_objective );
    objective_ = -neg_objective;
    basis_[r] = c;
  }

  /* After phase 1, pivots zero-level artificial variables out of the basis
     where a non-artificial column allows it. Rows where none does are
     redundant and keep their artificial at zero. */
  void expel_artificials()
  {
    for ( std::size_t i = 0; i < rows(); ++i )
    {
      if ( !is_artificial( basis_[i] ) )
      {
        continue;
      }
      for ( std::size_t j = 0; j < first_artificial_; ++j )
      {
        if ( sgn( coeffs_[i][j] ) != 0 )
        {
          pivot( i, j );
          break;
        }
      }
    }
  }

  const rational& objective() const { return objective_; }
  const rational& reduced( std::size_t j ) const { return reduced_[j]; }
  std::size_t identity_column( std::size_t i ) const { return identity_[i]; }
  std::size_t basic( std::size_t i ) const { return basis_[i]; }
  const rational& rhs( std::size_t i ) const { return rhs_[i]; }
  const rational& at( std::size_t i, std::size_t j ) const { return coeffs_[i][j]; }
  std::size_t entering() const { return entering_; }
  std::size_t pivots() const { return pivots_; }
  std::size_t first_artificial() const { return first_artificial_; }

private:
  std::size_t structural_;
  std::size_t first_slack_ = 0;
  std::size_t first_artificial_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<rational>> coeffs_;
  std::vector<rational> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> identity_;
  std::vector<rational> costs_;
  std::vector<rational> reduced_;
  rational objective_;
  std::size_t entering_ = 0;
  std::size_t pivots_ = 0;
};

void check_shape( const linear_program& program )
{
  const auto n = program.num_variables();
  for ( std::size_t i = 0; i < program.constraints.size(); ++i )
  {
    if ( program.constraints[i].row.size() != n )
    {
      throw error( errc::malformed_lp, "constraint " + std::to_string( i ) + " has " +
                                           std::to_string( program.constraints[i].row.size() ) +
                                           " coefficients, expected " + std::to_string( n ) );
    }
  }
  if ( !program.upper.empty() && program.upper.size() != n )
  {
    throw error( errc::malformed_lp, "upper bound vector has wrong length" );
  }
}

/* All rows, including upper bounds as <= rows, in dual order. */
std::vector<row_spec> all_rows( const linear_program& program )
{
  const auto n = program.num_variables();
  std::vector<row_spec> rows;
  for ( const auto& c : program.constraints )
  {
    rows.push_back( { c.row, c.rel, c.rhs } );
  }
  for ( std::size_t j = 0; j < program.upper.size(); ++j )
  {
    if ( program.upper[j] )
    {
      std::vector<rational> r( n );
      r[j] = 1;
      rows.push_back( { std::move( r ), relation::less_equal, *program.upper[j] } );
    }
  }
  return rows;
}

rational dot( const std::vector<rational>& a, const std::vector<rational>& b )
{
  rational s = 0;
  for ( std::size_t i = 0; i < a.size(); ++i )
  {
    if ( sgn( a[i] ) != 0 && sgn( b[i] ) != 0 )
    {
      s += a[i] * b[i];
    }
  }
  return s;
}

} // namespace

solution solve( const linear_program& program )
{
  check_shape( program );
  const auto n = program.num_variables();
  auto rows = all_rows( program );

  std::vector<int> flipped( rows.size(), 1 );
  for ( std::size_t i = 0; i < rows.size(); ++i )
  {
    if ( sgn( rows[i].rhs ) < 0 )
    {
      flipped[i] = -1;
      for ( auto& a : rows[i].coeffs )
      {
        a = -a;
      }
      rows[i].rhs = -rows[i].rhs;
      if ( rows[i].rel == relation::less_equal )
      {
        rows[i].rel = relation::greater_equal;
      }
      else if ( rows[i].rel == relation::greater_equal )
      {
        rows[i].rel = relation::less_equal;
      }
    }
  }

  tableau t( rows, n );
  solution sol;

  // Phase 1: minimize the sum of artificial variables.
  std::vector<rational> phase1( t.cols() );
  for ( std::size_t j = t.first_artificial(); j < t.cols(); ++j )
  {
    phase1[j] = 1;
  }
  t.set_costs( phase1 );
  t.run( true );
  if ( sgn( t.objective() ) > 0 )
  {
    sol.status = status::infeasible;
    sol.pivots = t.pivots();
    return sol;
  }
  t.expel_artificials();

  // Phase 2 always minimizes; a maximization is solved as min -c.
  const bool maximize = program.direction == sense::maximize;
  std::vector<rational> phase2( t.cols() );
  for ( std::size_t j = 0; j < n; ++j )
  {
    phase2[j] = maximize ? rational( -program.objective[j] ) : program.objective[j];
  }
  t.set_costs( phase2 );
  const auto result = t.run( false );
  sol.pivots = t.pivots();

  sol.primal.assign( n, 0 );
  for ( std::size_t i = 0; i < t.rows(); ++i )
  {
    if ( t.basic( i ) < n )
    {
      sol.primal[t.basic( i )] = t.rhs( i );
    }
  }
  sol.value = dot( program.objective, sol.primal );

  if ( result == tableau::outcome::unbounded )
  {
    sol.status = status::unbounded;
    const auto e = t.entering();
    sol.ray.assign( n, 0 );
    if ( e < n )
    {
      sol.ray[e] = 1;
    }
    for ( std::size_t i = 0; i < t.rows(); ++i )
    {
      if ( t.basic( i ) < n )
      {
        sol.ray[t.basic( i )] = -t.at( i, e );
      }
    }
    return sol;
  }

  sol.status = status::optimal;
  sol.dual.resize( rows.size() );
  for ( std::size_t i = 0; i < rows.size(); ++i )
  {
    rational y = -t.reduced( t.identity_column( i ) );
    if ( flipped[i] < 0 )
    {
      y = -y;
    }
    if ( maximize )
    {
      y = -y;
    }
    sol.dual[i] = y;
  }
  return sol;
}

bool verify( const linear_program& program, const solution& sol )
{
  if ( sol.status != status::optimal )
  {
    return false;
  }
  const auto n = program.num_variables();
  if ( program.constraints.size() > 0 && program.constraints.front().row.size() != n )
  {
    return false;
  }
  auto rows = all_rows( program );
  if ( sol.primal.size() != n || sol.dual.size() != rows.size() )
  {
    return false;
  }

  for ( const auto& x : sol.primal )
  {
    if ( sgn( x ) < 0 )
    {
      return false;
    }
  }
  for ( const auto& r : rows )
  {
    const auto lhs = dot( r.coeffs, sol.primal );
    if ( ( r.rel == relation::less_equal && lhs > r.rhs ) ||
         ( r.rel == relation::greater_equal && lhs < r.rhs ) ||
         ( r.rel == relation::equal && lhs != r.rhs ) )
    {
      return false;
    }
  }

  const bool maximize = program.direction == sense::maximize;
  for ( std::size_t i = 0; i < rows.size(); ++i )
  {
    const int s = sgn( sol.dual[i] );
    const auto rel = rows[i].rel;
    // Allowed sign of y_i for a minimization; reversed for a maximization.
    int allowed = rel == relation::greater_equal ? 1 : rel == relation::less_equal ? -1 : 0;
    if ( maximize )
    {
      allowed = -allowed;
    }
    if ( allowed != 0 && s != 0 && s != allowed )
    {
      return false;
    }
  }

  for ( std::size_t j = 0; j < n; ++j )
  {
    rational column = 0;
    for ( std::size_t i = 0; i < rows.size(); ++i )
    {
      if ( sgn( rows[i].coeffs[j] ) != 0 )
      {
        column += rows[i].coeffs[j] * sol.dual[i];
      }
    }
    if ( maximize ? column < program.objective[j] : column > program.objective[j] )
    {
      return false;
    }
  }

  rational dual_value = 0;
  for ( std::size_t i = 0; i < rows.size(); ++i )
  {
    dual_value += rows[i].rhs * sol.dual[i];
  }
  const auto primal_value = dot( program.objective, sol.primal );
  return primal_value == dual_value && primal_value == sol.value;
}

std::string dump( const linear_program& program )
{
  std::ostringstream out;
  auto term_list = [&]( const std::vector<rational>& coeffs ) {
    bool first = true;
    for ( std::size_t j = 0; j < coeffs.size(); ++j )
    {
      if ( sgn( coeffs[j] ) == 0 )
      {
        continue;
      }
      out << ( first ? "" : " + " ) << wmaj::to_string( coeffs[j] ) << " x" << j + 1;
      first = false;
    }
    if ( first )
    {
      out << "0";
    }
  };

  out << ( program.direction == sense::minimize ? "minimize" : "maximize" ) << "\n  obj: ";
  term_list( program.objective );
  out << "\nsubject to\n";
  for ( std::size_t i = 0; i < program.constraints.size(); ++i )
  {
    const auto& c = program.constraints[i];
    out << "  c" << i + 1 << ": ";
    term_list( c.row );
    out << ( c.rel == relation::less_equal ? " <= " : c.rel == relation::equal ? " = " : " >= " )
        << wmaj::to_string( c.rhs ) << "\n";
  }
  out << "bounds\n";
  for ( std::size_t j = 0; j < program.num_variables(); ++j )
  {
    out << "  0 <= x" << j + 1;
    if ( j < program.upper.size() && program.upper[j] )
    {
      out << " <= " << wmaj::to_string( *program.upper[j] );
    }
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

std::string to_string( status s )
{
  switch ( s )
  {
  case status::optimal: return "optimal";
  case status::infeasible: return "infeasible";
  case status::unbounded: return "unbounded";
  }
  return "unknown";
}

} // namespace wmaj::lp
