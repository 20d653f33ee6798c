#pragma once

#include "hamiltonian.hpp"
#include "landscape.hpp"
#include "simplex.hpp"
#include "truth_table.hpp"

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace invlogic
{

/// Which monomials the synthesized Hamiltonian may use.
struct BasisSpec
{
  int max_order = 3;
  int num_ancilla = 0;
  /// |c_alpha| <= bound; without a bound the gap LP is unbounded.
  std::optional<Rational> coeff_bound = Rational{ 1 };
  bool include_constant = false;
};

/// Role of one full spin assignment in the gap LP.
enum class StateClass
{
  Ground,    ///< energy == E_min
  Excited,   ///< energy >= E_min + d
  AtLeastMin ///< energy >= E_min
};

/*! \brief Gap-maximization LP for a truth table.
 *
 * Variables: one free coefficient per basis monomial, then E_min (free), then
 * d >= 0, then the optional constant. One equality per ground state, one
 * inequality per other state, two bound rows per coefficient when bounded.
 */
struct LPProblem
{
  LinearProgram program;
  std::vector<std::string> spin_names;
  std::vector<Monomial> monomials;
  std::size_t e_min_var = 0;
  std::size_t d_var = 0;
  std::optional<std::size_t> constant_var;
  std::size_t num_equalities = 0;
  std::size_t num_inequalities = 0;
  std::optional<Rational> coeff_bound;
};

struct SynthesisResult
{
  Hamiltonian hamiltonian;
  Rational e_min{ 0 };
  Rational d{ 0 };
  LandscapeStats certificate;
};

enum class SynthStatus
{
  Ok,
  Infeasible,
  Unbounded
};

inline const char* to_string( SynthStatus s )
{
  switch ( s )
  {
  case SynthStatus::Ok:
    return "OK";
  case SynthStatus::Infeasible:
    return "INFEASIBLE";
  case SynthStatus::Unbounded:
    return "UNBOUNDED";
  }
  return "?";
}

struct SynthesisOutcome
{
  SynthStatus status = SynthStatus::Infeasible;
  std::optional<SynthesisResult> result;

  bool ok() const noexcept { return status == SynthStatus::Ok; }
};

/// Every subset of {0..n-1} with 1 <= size <= max_order, in MonomialOrder.
inline std::vector<Monomial> basis_monomials( std::size_t n, int max_order )
{
  std::vector<Monomial> out;
  for ( int k = 1; k <= max_order && static_cast<std::size_t>( k ) <= n; ++k )
  {
    std::vector<SpinIndex> idx( k );
    for ( int i = 0; i < k; ++i )
      idx[i] = static_cast<SpinIndex>( i );
    for ( ;; )
    {
      out.emplace_back( idx );
      int i = k - 1;
      while ( i >= 0 && idx[i] == n - k + i )
        --i;
      if ( i < 0 )
        break;
      ++idx[i];
      for ( int j = i + 1; j < k; ++j )
        idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

/// Builds the LP over an explicit classification of all 2^n states (bit i of the index = spin i is +1).
inline LPProblem build_classified_lp( std::vector<std::string> spin_names, const std::vector<StateClass>& classes,
                                      const BasisSpec& basis )
{
  const std::size_t n = spin_names.size();
  if ( classes.size() != ( std::size_t{ 1 } << n ) )
    throw std::invalid_argument( "need one class per spin assignment" );
  if ( basis.max_order < 1 || static_cast<std::size_t>( basis.max_order ) > n )
    throw std::invalid_argument( "max_order must lie in [1, number of spins]" );
  if ( basis.coeff_bound && *basis.coeff_bound <= 0 )
    throw std::invalid_argument( "coefficient bound must be positive" );

  LPProblem lp;
  lp.spin_names = std::move( spin_names );
  lp.monomials = basis_monomials( n, basis.max_order );
  lp.coeff_bound = basis.coeff_bound;

  auto& prog = lp.program;
  for ( const auto& m : lp.monomials )
  {
    std::string name = "c";
    for ( auto v : m.vars() )
      name += "_" + lp.spin_names[v];
    prog.add_variable( std::move( name ), true );
  }
  lp.e_min_var = prog.add_variable( "E_min", true );
  lp.d_var = prog.add_variable( "d", false );
  if ( basis.include_constant )
    lp.constant_var = prog.add_variable( "offset", true );
  prog.objective[lp.d_var] = 1;
  prog.maximize = true;

  const std::size_t nv = prog.num_variables();
  for ( std::uint64_t k = 0; k < classes.size(); ++k )
  {
    // E(s) - E_min [- d]  (=, >=) 0  with  E(s) = offset - sum c_alpha phi_alpha(s)
    std::vector<Rational> row( nv );
    for ( std::size_t j = 0; j < lp.monomials.size(); ++j )
    {
      int phi = 1;
      for ( auto v : lp.monomials[j].vars() )
        phi *= ( ( k >> v ) & 1u ) ? 1 : -1;
      row[j] = -phi;
    }
    row[lp.e_min_var] = -1;
    if ( lp.constant_var )
      row[*lp.constant_var] = 1;
    switch ( classes[k] )
    {
    case StateClass::Ground:
      prog.add_constraint( std::move( row ), Relation::Equal, 0 );
      ++lp.num_equalities;
      break;
    case StateClass::Excited:
      row[lp.d_var] = -1;
      prog.add_constraint( std::move( row ), Relation::GreaterEqual, 0 );
      ++lp.num_inequalities;
      break;
    case StateClass::AtLeastMin:
      prog.add_constraint( std::move( row ), Relation::GreaterEqual, 0 );
      ++lp.num_inequalities;
      break;
    }
  }

  if ( basis.coeff_bound )
    for ( std::size_t j = 0; j < lp.monomials.size(); ++j )
    {
      std::vector<Rational> up( nv ), down( nv );
      up[j] = 1;
      down[j] = -1;
      prog.add_constraint( std::move( up ), Relation::LessEqual, *basis.coeff_bound );
      prog.add_constraint( std::move( down ), Relation::LessEqual, *basis.coeff_bound );
    }
  return lp;
}

/// Spin names for a truth table plus `num_ancilla` auxiliary spins.
inline std::vector<std::string> synthesis_spin_names( const TruthTable& tt, int num_ancilla )
{
  auto names = tt.names();
  for ( int a = 0; a < num_ancilla; ++a )
    names.push_back( "anc" + std::to_string( a ) );
  return names;
}

/// Gap LP of a truth table without ancillas.
inline LPProblem build_lp( const TruthTable& tt, const BasisSpec& basis )
{
  if ( basis.num_ancilla != 0 )
    throw std::invalid_argument( "build_lp takes no ancillas; use enumerate_ancilla_lp" );
  std::vector<StateClass> classes( std::size_t{ 1 } << tt.width() );
  for ( std::uint32_t k = 0; k < classes.size(); ++k )
    classes[k] = tt.is_valid( k ) ? StateClass::Ground : StateClass::Excited;
  return build_classified_lp( synthesis_spin_names( tt, 0 ), classes, basis );
}

namespace detail
{

inline SynthesisResult result_from_values( const LPProblem& lp, const std::vector<Rational>& x )
{
  Hamiltonian h{ lp.spin_names };
  for ( std::size_t j = 0; j < lp.monomials.size(); ++j )
    if ( x[j] != 0 )
      h.add_term( lp.monomials[j], x[j] );
  if ( lp.constant_var )
    h.set_offset( x[*lp.constant_var] );
  SynthesisResult r;
  r.e_min = x[lp.e_min_var];
  r.d = x[lp.d_var];
  r.certificate = enumerate_landscape( h );
  r.hamiltonian = std::move( h );
  return r;
}

} // namespace detail

/// Maximum gap only, without tie-breaking; nullopt when unbounded.
inline std::optional<Rational> max_gap( const LPProblem& lp )
{
  const auto sol = solve( lp.program );
  if ( sol.status == LpStatus::Unbounded )
    return std::nullopt;
  if ( sol.status == LpStatus::Infeasible )
    return Rational{ 0 };
  return sol.objective;
}

/*! \brief Exact optimum of the gap LP with deterministic tie-breaking.
 *
 * Stages: maximize d; then minimize sum |c_alpha| (auxiliary t_alpha >= |c_alpha|);
 * then minimize each coefficient in basis order. A zero optimal gap is INFEASIBLE.
 */
inline SynthesisOutcome solve_lp( const LPProblem& lp )
{
  LinearProgram prog = lp.program;
  const std::size_t n_base = prog.num_variables();
  std::vector<std::size_t> coeff_vars;
  for ( std::size_t j = 0; j < lp.monomials.size(); ++j )
    coeff_vars.push_back( j );
  if ( lp.constant_var )
    coeff_vars.push_back( *lp.constant_var );

  std::vector<std::size_t> abs_vars;
  for ( auto j : coeff_vars )
    abs_vars.push_back( prog.add_variable( "t_" + prog.names[j], false ) );
  const std::size_t nv = prog.num_variables();
  for ( std::size_t k = 0; k < coeff_vars.size(); ++k )
  {
    std::vector<Rational> a( nv ), b( nv );
    a[abs_vars[k]] = 1;
    a[coeff_vars[k]] = -1;
    b[abs_vars[k]] = 1;
    b[coeff_vars[k]] = 1;
    prog.add_constraint( std::move( a ), Relation::GreaterEqual, 0 );
    prog.add_constraint( std::move( b ), Relation::GreaterEqual, 0 );
  }

  std::vector<LpObjective> stages;
  {
    LpObjective gap{ std::vector<Rational>( nv ), true };
    gap.coeffs[lp.d_var] = 1;
    stages.push_back( std::move( gap ) );
    LpObjective l1{ std::vector<Rational>( nv ), false };
    for ( auto t : abs_vars )
      l1.coeffs[t] = 1;
    stages.push_back( std::move( l1 ) );
    for ( auto j : coeff_vars )
    {
      LpObjective lex{ std::vector<Rational>( nv ), false };
      lex.coeffs[j] = 1;
      stages.push_back( std::move( lex ) );
    }
  }

  const auto sol = solve_lexicographic( prog, stages );
  SynthesisOutcome out;
  if ( sol.status == LpStatus::Unbounded )
  {
    out.status = SynthStatus::Unbounded;
    return out;
  }
  if ( sol.status == LpStatus::Infeasible || sol.objective <= 0 )
  {
    out.status = SynthStatus::Infeasible;
    return out;
  }
  std::vector<Rational> x( sol.values.begin(), sol.values.begin() + static_cast<std::ptrdiff_t>( n_base ) );
  out.status = SynthStatus::Ok;
  out.result = detail::result_from_values( lp, x );
  return out;
}

/*! \brief Two-level Hamiltonian via the Walsh-Hadamard transform.
 *
 * The unique multilinear polynomial over all p+q spins equal to e_valid on the
 * rows of the function and e_invalid elsewhere. Its mean lands in the offset.
 */
inline SynthesisResult two_level_construct( const TruthTable& tt, const Rational& e_valid, const Rational& e_invalid )
{
  if ( !( e_invalid > e_valid ) )
    throw std::invalid_argument( "e_invalid must exceed e_valid" );
  const int n = tt.width();
  const std::size_t size = std::size_t{ 1 } << n;

  std::vector<Rational> f( size );
  for ( std::uint32_t k = 0; k < size; ++k )
    f[k] = tt.is_valid( k ) ? e_valid : e_invalid;
  // index bit i set <=> m_i = +1; after the butterflies, f[alpha] = sum_s f(s) prod_{i in alpha} m_i
  for ( int b = 0; b < n; ++b )
  {
    const std::size_t bit = std::size_t{ 1 } << b;
    for ( std::size_t k = 0; k < size; ++k )
      if ( !( k & bit ) )
      {
        const Rational lo = f[k];
        const Rational hi = f[k | bit];
        f[k] = lo + hi;
        f[k | bit] = hi - lo;
      }
  }

  Hamiltonian h{ tt.names() };
  const Rational norm{ static_cast<std::int64_t>( size ) };
  for ( std::size_t alpha = 1; alpha < size; ++alpha )
  {
    if ( f[alpha] == 0 )
      continue;
    std::vector<SpinIndex> vars;
    for ( int i = 0; i < n; ++i )
      if ( alpha & ( std::size_t{ 1 } << i ) )
        vars.push_back( static_cast<SpinIndex>( i ) );
    h.add_term( Monomial{ std::move( vars ) }, Rational{ -f[alpha] / norm } );
  }
  h.set_offset( f[0] / norm );

  SynthesisResult r;
  r.e_min = e_valid;
  r.d = e_invalid - e_valid;
  r.certificate = enumerate_landscape( h );
  r.hamiltonian = std::move( h );
  return r;
}

/*! \brief Gap LP with auxiliary spins, searched over ancilla designations.
 *
 * Candidate k assigns ancilla value (k >> (a*x)) & (2^a - 1) to the valid row of
 * input x. Each candidate requires its designated states at E_min, every state
 * with an invalid (x, y) at >= E_min + d and every other state at >= E_min.
 * The first candidate with the largest gap wins and is then tie-broken as in
 * solve_lp.
 */
inline SynthesisOutcome enumerate_ancilla_lp( const TruthTable& tt, const BasisSpec& basis )
{
  const int a = basis.num_ancilla;
  const int width = tt.width() + a;
  if ( a < 0 )
    throw std::invalid_argument( "negative ancilla count" );
  if ( width > 6 )
    throw std::invalid_argument( "ancilla search is limited to p + q + ancilla <= 6" );

  const std::uint32_t io_mask = ( 1u << tt.width() ) - 1u;
  const std::uint32_t rows = 1u << tt.inputs();
  const std::uint64_t candidates = std::uint64_t{ 1 } << ( static_cast<std::uint64_t>( a ) * rows );
  const auto names = synthesis_spin_names( tt, a );

  auto classes_for = [&]( std::uint64_t cand ) {
    std::vector<StateClass> classes( std::size_t{ 1 } << width );
    for ( std::uint32_t k = 0; k < classes.size(); ++k )
    {
      const std::uint32_t xy = k & io_mask;
      if ( !tt.is_valid( xy ) )
      {
        classes[k] = StateClass::Excited;
        continue;
      }
      const std::uint32_t x = xy & ( rows - 1u );
      const std::uint64_t designated = a == 0 ? 0 : ( cand >> ( a * x ) ) & ( ( 1u << a ) - 1u );
      classes[k] = ( k >> tt.width() ) == designated ? StateClass::Ground : StateClass::AtLeastMin;
    }
    return classes;
  };

  std::optional<std::uint64_t> best;
  Rational best_gap{ 0 };
  for ( std::uint64_t c = 0; c < candidates; ++c )
  {
    const auto lp = build_classified_lp( names, classes_for( c ), basis );
    const auto gap = max_gap( lp );
    if ( !gap )
      return { SynthStatus::Unbounded, std::nullopt };
    if ( *gap > best_gap )
    {
      best_gap = *gap;
      best = c;
    }
  }
  if ( !best )
    return { SynthStatus::Infeasible, std::nullopt };
  return solve_lp( build_classified_lp( names, classes_for( *best ), basis ) );
}

struct VerifyReport
{
  bool ok = false;
  std::string message;
  std::optional<SpinState> first_violation;
  Rational e_min{ 0 };
  Rational d{ 0 };
  Rational delta_e_max{ 0 };
  std::size_t n_levels = 0;
};

/*! \brief Re-checks the ground-state conditions by enumeration.
 *
 * The first p+q spins are the function's inputs and outputs, the rest are
 * ancillas. For every (x, y) take the minimum over ancillas: rows of the
 * function must sit at the global minimum and all others strictly above it.
 * The achieved gap d is the lowest invalid minimum minus E_min.
 */
inline VerifyReport verify( const SynthesisResult& result, const TruthTable& tt )
{
  VerifyReport rep;
  const auto& h = result.hamiltonian;
  const int n = static_cast<int>( h.num_spins() );
  if ( n < tt.width() )
  {
    rep.message = "Hamiltonian has fewer spins than the truth table";
    return rep;
  }
  if ( n > 24 )
  {
    rep.message = "too many spins to verify exhaustively";
    return rep;
  }
  const auto stats = enumerate_landscape( h );
  rep.e_min = stats.e_min;
  rep.delta_e_max = stats.delta_e_max;
  rep.n_levels = stats.n_levels;

  const IntegerHamiltonian ih = to_integer( h );
  const std::uint32_t io = 1u << tt.width();
  std::vector<std::optional<std::int64_t>> best( io );
  std::vector<std::uint64_t> witness( io );
  for ( std::uint64_t k = 0; k < ( std::uint64_t{ 1 } << n ); ++k )
  {
    const auto s = SpinState::from_bits( k, h.num_spins() );
    const std::int64_t e = ih.energy( s.values() );
    const auto xy = static_cast<std::uint32_t>( k & ( io - 1u ) );
    if ( !best[xy] || e < *best[xy] )
    {
      best[xy] = e;
      witness[xy] = k;
    }
  }

  const Rational scale{ ih.scale };
  const std::int64_t e_min_scaled = to_int64( Rational{ stats.e_min * scale } );
  std::optional<std::int64_t> lowest_invalid;
  std::ostringstream why;
  for ( std::uint32_t xy = 0; xy < io; ++xy )
  {
    const bool valid = tt.is_valid( xy );
    if ( valid && *best[xy] != e_min_scaled && !rep.first_violation )
    {
      rep.first_violation = SpinState::from_bits( witness[xy], h.num_spins() );
      why << "valid state " << rep.first_violation->bit_string() << " has energy "
          << to_string( Rational{ *best[xy] } / scale ) << " above E_min " << to_string( stats.e_min );
    }
    if ( !valid )
    {
      if ( *best[xy] <= e_min_scaled && !rep.first_violation )
      {
        rep.first_violation = SpinState::from_bits( witness[xy], h.num_spins() );
        why << "invalid state " << rep.first_violation->bit_string() << " reaches E_min";
      }
      if ( !lowest_invalid || *best[xy] < *lowest_invalid )
        lowest_invalid = best[xy];
    }
  }
  rep.d = lowest_invalid ? Rational{ Rational{ *lowest_invalid - e_min_scaled } / scale } : Rational{ 0 };
  if ( !rep.first_violation && rep.d <= 0 )
    why << "zero gap";
  if ( !rep.first_violation && rep.d > 0 && result.e_min != stats.e_min )
    why << "reported E_min " << to_string( result.e_min ) << " differs from enumerated " << to_string( stats.e_min );
  rep.message = why.str();
  rep.ok = rep.message.empty();
  if ( rep.ok )
    rep.message = "ok";
  return rep;
}

} // namespace invlogic
