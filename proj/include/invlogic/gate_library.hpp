#pragma once

#include "hamiltonian.hpp"
#include "landscape.hpp"
#include "synth.hpp"
#include "truth_table.hpp"

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace invlogic
{

enum class GateKind
{
  AND,
  OR,
  XOR,
  XNOR,
  NOT,
  BUF
};

inline constexpr std::array<GateKind, 6> all_gate_kinds{ GateKind::AND, GateKind::OR,  GateKind::XOR,
                                                         GateKind::XNOR, GateKind::NOT, GateKind::BUF };

inline std::string_view to_string( GateKind k )
{
  switch ( k )
  {
  case GateKind::AND:
    return "AND";
  case GateKind::OR:
    return "OR";
  case GateKind::XOR:
    return "XOR";
  case GateKind::XNOR:
    return "XNOR";
  case GateKind::NOT:
    return "NOT";
  case GateKind::BUF:
    return "BUF";
  }
  return "?";
}

inline GateKind parse_gate_kind( std::string_view s )
{
  for ( auto k : all_gate_kinds )
    if ( to_string( k ) == s )
      return k;
  if ( s == "BUFFER" )
    return GateKind::BUF;
  throw std::invalid_argument( "unknown gate kind '" + std::string{ s } + "'" );
}

inline TruthTable truth_table_of( GateKind k )
{
  switch ( k )
  {
  case GateKind::AND:
    return gates::and2();
  case GateKind::OR:
    return gates::or2();
  case GateKind::XOR:
    return gates::xor2();
  case GateKind::XNOR:
    return gates::xnor2();
  case GateKind::NOT:
    return gates::not1();
  case GateKind::BUF:
    return gates::buf1();
  }
  throw std::invalid_argument( "bad gate kind" );
}

/// Hamiltonian of one gate. Spins: inputs, output, then ancillas.
struct GateBody
{
  GateKind kind;
  Hamiltonian hamiltonian;
  Rational e_min{ 0 };
  int io_pins = 0;
  int ancillas = 0;
};

enum class BodyOrder
{
  Two = 2,
  Three = 3
};

inline std::string_view to_string( BodyOrder b )
{
  return b == BodyOrder::Two ? "two-body" : "three-body";
}

class GateLibrary
{
public:
  GateLibrary( std::string name, std::map<GateKind, GateBody> bodies )
      : name_( std::move( name ) ), bodies_( std::move( bodies ) ) {}

  const std::string& name() const noexcept { return name_; }
  bool contains( GateKind k ) const { return bodies_.contains( k ); }

  const GateBody& at( GateKind k ) const
  {
    auto it = bodies_.find( k );
    if ( it == bodies_.end() )
      throw std::out_of_range( "gate library '" + name_ + "' has no " + std::string{ to_string( k ) } );
    return it->second;
  }

  const std::map<GateKind, GateBody>& bodies() const noexcept { return bodies_; }

private:
  std::string name_;
  std::map<GateKind, GateBody> bodies_;
};

namespace detail
{

inline GateBody make_body( GateKind k, Hamiltonian h )
{
  const auto tt = truth_table_of( k );
  const int io = tt.width();
  const int anc = static_cast<int>( h.num_spins() ) - io;
  const auto stats = enumerate_landscape( h );
  return GateBody{ k, std::move( h ), stats.e_min, io, anc };
}

/// Two-level gates with E_min = -2 and every invalid state at +2.
inline GateBody two_level_body( GateKind k )
{
  return make_body( k, two_level_construct( truth_table_of( k ), -2, 2 ).hamiltonian );
}

} // namespace detail

/*! \brief Gate Hamiltonians with interactions up to three spins.
 *
 * Each gate has exactly two energy levels, -2 on its rows and +2 elsewhere.
 * AND is c_Y = -1, c_AY = c_BY = c_ABY = 1; XOR is c_ABY = -2.
 */
inline GateLibrary three_body_library()
{
  std::map<GateKind, GateBody> bodies;
  for ( auto k : all_gate_kinds )
    bodies.emplace( k, detail::two_level_body( k ) );
  return GateLibrary{ "three-body", std::move( bodies ) };
}

/*! \brief Classic pairwise gate Hamiltonians.
 *
 * AND: h_A = h_B = 1, h_Y = -2, J_AB = -1, J_AY = J_BY = 2 (levels -3, 1, 9).
 * OR is AND with every spin negated. XOR needs one ancilla; the body below has
 * landscape (-4, 2, 18, 4). XNOR is XOR with the output negated. NOT/BUF are
 * single couplings and identical in both libraries.
 */
inline GateLibrary two_body_library()
{
  std::map<GateKind, GateBody> bodies;

  Hamiltonian and_h{ { "A", "B", "Y" } };
  and_h.add_term( { "A" }, 1 );
  and_h.add_term( { "B" }, 1 );
  and_h.add_term( { "Y" }, -2 );
  and_h.add_term( { "A", "B" }, -1 );
  and_h.add_term( { "A", "Y" }, 2 );
  and_h.add_term( { "B", "Y" }, 2 );
  const std::array<SpinIndex, 3> all3{ 0, 1, 2 };
  bodies.emplace( GateKind::OR, detail::make_body( GateKind::OR, and_h.negated( all3 ) ) );
  bodies.emplace( GateKind::AND, detail::make_body( GateKind::AND, std::move( and_h ) ) );

  Hamiltonian xor_h{ { "A", "B", "Y", "anc0" } };
  xor_h.add_term( { "A" }, -1 );
  xor_h.add_term( { "B" }, -1 );
  xor_h.add_term( { "Y" }, -1 );
  xor_h.add_term( { "anc0" }, -2 );
  xor_h.add_term( { "A", "B" }, -1 );
  xor_h.add_term( { "A", "Y" }, -1 );
  xor_h.add_term( { "A", "anc0" }, -2 );
  xor_h.add_term( { "B", "Y" }, -1 );
  xor_h.add_term( { "B", "anc0" }, -2 );
  xor_h.add_term( { "Y", "anc0" }, -2 );
  const std::array<SpinIndex, 1> out{ 2 };
  bodies.emplace( GateKind::XNOR, detail::make_body( GateKind::XNOR, xor_h.negated( out ) ) );
  bodies.emplace( GateKind::XOR, detail::make_body( GateKind::XOR, std::move( xor_h ) ) );

  bodies.emplace( GateKind::NOT, detail::two_level_body( GateKind::NOT ) );
  bodies.emplace( GateKind::BUF, detail::two_level_body( GateKind::BUF ) );
  return GateLibrary{ "two-body", std::move( bodies ) };
}

inline GateLibrary library_for( BodyOrder order )
{
  return order == BodyOrder::Two ? two_body_library() : three_body_library();
}

} // namespace invlogic
