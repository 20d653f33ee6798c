#pragma once

#include "rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace invlogic
{

enum class Relation
{
  LessEqual,
  Equal,
  GreaterEqual
};

struct LinearConstraint
{
  std::vector<Rational> coeffs;
  Relation relation = Relation::LessEqual;
  Rational rhs{ 0 };
};

/// Small dense linear program; variables are non-negative unless marked free.
struct LinearProgram
{
  std::vector<std::string> names;
  std::vector<bool> is_free;
  std::vector<LinearConstraint> constraints;
  std::vector<Rational> objective;
  bool maximize = true;

  std::size_t num_variables() const noexcept { return names.size(); }

  std::size_t add_variable( std::string name, bool free )
  {
    names.push_back( std::move( name ) );
    is_free.push_back( free );
    objective.emplace_back( 0 );
    for ( auto& c : constraints )
      c.coeffs.emplace_back( 0 );
    return names.size() - 1;
  }

  void add_constraint( std::vector<Rational> coeffs, Relation rel, Rational rhs )
  {
    if ( coeffs.size() != names.size() )
      throw std::invalid_argument( "constraint width does not match variable count" );
    constraints.push_back( { std::move( coeffs ), rel, std::move( rhs ) } );
  }
};

enum class LpStatus
{
  Optimal,
  Infeasible,
  Unbounded
};

/// One stage of a lexicographic objective sequence.
struct LpObjective
{
  std::vector<Rational> coeffs;
  bool maximize = true;
};

struct LpSolution
{
  LpStatus status = LpStatus::Infeasible;
  /// Value of the first objective.
  Rational objective{ 0 };
  /// Value of every objective stage, in order.
  std::vector<Rational> stage_values;
  std::vector<Rational> values;
  std::size_t pivots = 0;
};

namespace detail
{

/*! Exact two-phase tableau simplex with Bland's anti-cycling rule.
 *
 * The objective row holds reduced costs r_j = c_j - c_B B^-1 A_j (maximization)
 * in columns [0, n) and -c_B x_B in the last column.
 */
class Tableau
{
public:
  std::vector<std::vector<Rational>> rows;
  std::vector<std::size_t> basis;
  std::vector<bool> allowed;
  std::vector<Rational> obj;
  std::size_t n = 0;
  std::size_t pivots = 0;

  void pivot( std::size_t r, std::size_t e )
  {
    ++pivots;
    auto& prow = rows[r];
    const Rational p = prow[e];
    for ( auto& v : prow )
      if ( v != 0 )
        v /= p;
    for ( std::size_t i = 0; i < rows.size(); ++i )
    {
      if ( i == r || rows[i][e] == 0 )
        continue;
      const Rational f = rows[i][e];
      for ( std::size_t j = 0; j <= n; ++j )
        if ( prow[j] != 0 )
          rows[i][j] -= f * prow[j];
    }
    if ( obj[e] != 0 )
    {
      const Rational f = obj[e];
      for ( std::size_t j = 0; j <= n; ++j )
        if ( prow[j] != 0 )
          obj[j] -= f * prow[j];
    }
    basis[r] = e;
  }

  void load_objective( const std::vector<Rational>& cost )
  {
    obj.assign( n + 1, Rational{ 0 } );
    for ( std::size_t j = 0; j < n; ++j )
      obj[j] = cost[j];
    for ( std::size_t i = 0; i < rows.size(); ++i )
    {
      const Rational& cb = cost[basis[i]];
      if ( cb == 0 )
        continue;
      for ( std::size_t j = 0; j <= n; ++j )
        if ( rows[i][j] != 0 )
          obj[j] -= cb * rows[i][j];
    }
  }

  /// Returns false if unbounded.
  bool optimize()
  {
    for ( ;; )
    {
      std::optional<std::size_t> enter;
      for ( std::size_t j = 0; j < n; ++j )
        if ( allowed[j] && obj[j] > 0 )
        {
          enter = j;
          break;
        }
      if ( !enter )
        return true;

      std::optional<std::size_t> leave;
      Rational best;
      for ( std::size_t i = 0; i < rows.size(); ++i )
      {
        const auto& a = rows[i][*enter];
        if ( a <= 0 )
          continue;
        Rational ratio = rows[i][n] / a;
        if ( !leave || ratio < best || ( ratio == best && basis[i] < basis[*leave] ) )
        {
          leave = i;
          best = std::move( ratio );
        }
      }
      if ( !leave )
        return false;
      pivot( *leave, *enter );
    }
  }
};

} // namespace detail

/*! \brief Lexicographic optimization over the feasible set of `lp`.
 *
 * Each stage optimizes its objective over the optimal face of the previous
 * stages: after a stage, columns with non-zero reduced cost are frozen at zero
 * and the tableau is reused. `lp.objective` is ignored. Unbounded is reported
 * if any stage is unbounded.
 */
inline LpSolution solve_lexicographic( const LinearProgram& lp, const std::vector<LpObjective>& stages )
{
  const std::size_t nv = lp.num_variables();
  if ( lp.is_free.size() != nv || stages.empty() )
    throw std::invalid_argument( "malformed linear program" );
  for ( const auto& st : stages )
    if ( st.coeffs.size() != nv )
      throw std::invalid_argument( "objective width does not match variable count" );

  // structural columns: x+ for every variable, x- for free ones
  std::vector<std::size_t> pos_col( nv ), neg_col( nv, SIZE_MAX );
  std::size_t ncols = 0;
  for ( std::size_t j = 0; j < nv; ++j )
  {
    pos_col[j] = ncols++;
    if ( lp.is_free[j] )
      neg_col[j] = ncols++;
  }
  const std::size_t n_struct = ncols;

  struct Row
  {
    std::vector<Rational> a;
    Relation rel;
    Rational b;
  };
  std::vector<Row> rows;
  for ( const auto& c : lp.constraints )
  {
    if ( c.coeffs.size() != nv )
      throw std::invalid_argument( "constraint width does not match variable count" );
    Row r{ std::vector<Rational>( n_struct ), c.relation, c.rhs };
    for ( std::size_t j = 0; j < nv; ++j )
    {
      r.a[pos_col[j]] = c.coeffs[j];
      if ( lp.is_free[j] )
        r.a[neg_col[j]] = -c.coeffs[j];
    }
    if ( r.b < 0 )
    {
      for ( auto& v : r.a )
        v = -v;
      r.b = -r.b;
      if ( r.rel == Relation::LessEqual )
        r.rel = Relation::GreaterEqual;
      else if ( r.rel == Relation::GreaterEqual )
        r.rel = Relation::LessEqual;
    }
    rows.push_back( std::move( r ) );
  }

  const std::size_t m = rows.size();
  std::size_t n_slack = 0, n_art = 0;
  for ( const auto& r : rows )
  {
    if ( r.rel != Relation::Equal )
      ++n_slack;
    if ( r.rel != Relation::LessEqual )
      ++n_art;
  }
  const std::size_t n = n_struct + n_slack + n_art;
  const std::size_t first_art = n_struct + n_slack;

  detail::Tableau t;
  t.n = n;
  t.rows.assign( m, std::vector<Rational>( n + 1 ) );
  t.basis.assign( m, 0 );
  t.allowed.assign( n, true );
  std::size_t s = n_struct, a = first_art;
  for ( std::size_t i = 0; i < m; ++i )
  {
    for ( std::size_t j = 0; j < n_struct; ++j )
      t.rows[i][j] = rows[i].a[j];
    t.rows[i][n] = rows[i].b;
    switch ( rows[i].rel )
    {
    case Relation::LessEqual:
      t.rows[i][s] = 1;
      t.basis[i] = s++;
      break;
    case Relation::GreaterEqual:
      t.rows[i][s++] = -1;
      t.rows[i][a] = 1;
      t.basis[i] = a++;
      break;
    case Relation::Equal:
      t.rows[i][a] = 1;
      t.basis[i] = a++;
      break;
    }
  }

  LpSolution sol;
  if ( n_art > 0 )
  {
    std::vector<Rational> phase1( n );
    for ( std::size_t j = first_art; j < n; ++j )
      phase1[j] = -1;
    t.load_objective( phase1 );
    t.optimize(); // bounded below by 0
    if ( t.obj[n] != 0 )
    {
      sol.status = LpStatus::Infeasible;
      sol.pivots = t.pivots;
      return sol;
    }
    // drive remaining artificials out of the basis; drop redundant rows
    for ( std::size_t i = 0; i < t.rows.size(); )
    {
      if ( t.basis[i] < first_art )
      {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for ( std::size_t j = 0; j < first_art; ++j )
        if ( t.rows[i][j] != 0 )
        {
          col = j;
          break;
        }
      if ( col )
      {
        t.pivot( i, *col );
        ++i;
      }
      else
      {
        t.rows.erase( t.rows.begin() + static_cast<std::ptrdiff_t>( i ) );
        t.basis.erase( t.basis.begin() + static_cast<std::ptrdiff_t>( i ) );
      }
    }
    for ( std::size_t j = first_art; j < n; ++j )
      t.allowed[j] = false;
  }

  for ( std::size_t k = 0; k < stages.size(); ++k )
  {
    if ( k > 0 )
      for ( std::size_t j = 0; j < n; ++j )
        if ( t.obj[j] != 0 )
          t.allowed[j] = false;

    std::vector<Rational> cost( n );
    for ( std::size_t j = 0; j < nv; ++j )
    {
      const Rational c = stages[k].maximize ? stages[k].coeffs[j] : Rational{ -stages[k].coeffs[j] };
      cost[pos_col[j]] = c;
      if ( lp.is_free[j] )
        cost[neg_col[j]] = -c;
    }
    t.load_objective( cost );
    const bool bounded = t.optimize();
    sol.pivots = t.pivots;
    if ( !bounded )
    {
      sol.status = LpStatus::Unbounded;
      return sol;
    }
    sol.stage_values.push_back( stages[k].maximize ? Rational{ -t.obj[n] } : t.obj[n] );
  }

  std::vector<Rational> x( n );
  for ( std::size_t i = 0; i < t.rows.size(); ++i )
    x[t.basis[i]] = t.rows[i][n];
  sol.status = LpStatus::Optimal;
  sol.values.resize( nv );
  for ( std::size_t j = 0; j < nv; ++j )
  {
    sol.values[j] = x[pos_col[j]];
    if ( lp.is_free[j] )
      sol.values[j] -= x[neg_col[j]];
  }
  sol.objective = sol.stage_values.front();
  return sol;
}

/// Solves the program exactly. Deterministic for a given constraint order.
inline LpSolution solve( const LinearProgram& lp )
{
  if ( lp.objective.size() != lp.num_variables() )
    throw std::invalid_argument( "malformed linear program" );
  return solve_lexicographic( lp, { LpObjective{ lp.objective, lp.maximize } } );
}

} // namespace invlogic
