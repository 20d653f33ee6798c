#pragma once

#include "gate_library.hpp"
#include "hamiltonian.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace invlogic
{

/// One gate over named nets; pins list inputs then the output (ancillas are added at elaboration).
struct GateInstance
{
  GateKind kind;
  std::vector<std::string> pins;
};

/*! \brief Gate-level circuit over named nets.
 *
 * Interface words map a name to its nets, least significant bit first.
 * `constants` ties nets to fixed bits when the circuit is elaborated.
 */
struct Netlist
{
  std::vector<std::string> nets;
  std::vector<GateInstance> gates;
  std::map<std::string, std::vector<std::string>> inputs;
  std::map<std::string, std::vector<std::string>> outputs;
  std::map<std::string, int> constants;
};

inline int io_pin_count( GateKind k )
{
  return k == GateKind::NOT || k == GateKind::BUF ? 2 : 3;
}

inline void validate( const Netlist& nl )
{
  std::set<std::string> nets;
  for ( const auto& n : nl.nets )
    if ( !nets.insert( n ).second )
      throw std::invalid_argument( "duplicate net '" + n + "'" );
  auto require = [&]( const std::string& n, const std::string& where ) {
    if ( !nets.contains( n ) )
      throw std::invalid_argument( "dangling net '" + n + "' in " + where );
  };
  for ( std::size_t g = 0; g < nl.gates.size(); ++g )
  {
    const auto& gi = nl.gates[g];
    const std::string where = "gate " + std::to_string( g ) + " (" + std::string{ to_string( gi.kind ) } + ")";
    if ( static_cast<int>( gi.pins.size() ) != io_pin_count( gi.kind ) )
      throw std::invalid_argument( where + " has " + std::to_string( gi.pins.size() ) + " pins, expected " +
                                   std::to_string( io_pin_count( gi.kind ) ) );
    for ( const auto& p : gi.pins )
      require( p, where );
  }
  for ( const auto* words : { &nl.inputs, &nl.outputs } )
    for ( const auto& [w, bits] : *words )
      for ( const auto& b : bits )
        require( b, "interface word " + w );
  for ( const auto& [n, v] : nl.constants )
  {
    require( n, "constants" );
    if ( v != 0 && v != 1 )
      throw std::invalid_argument( "constant net '" + n + "' must be 0 or 1" );
  }
}

/*! \brief Summed gate Hamiltonian of a netlist.
 *
 * `hamiltonian` ranges over the free nets only; nets in `fixed` were clamped
 * and folded into lower-order terms. ground_energy is the sum of per-gate
 * minima and is what a consistent assignment attains.
 */
struct CircuitHamiltonian
{
  Hamiltonian hamiltonian;
  std::map<std::string, SpinIndex> net_map;
  Rational ground_energy{ 0 };
  std::map<std::string, std::int8_t> fixed;
  Netlist netlist;
  /// Auto-named ancilla nets, per gate index.
  std::map<std::size_t, std::vector<std::string>> ancillas;
};

namespace detail
{
inline void rebuild_net_map( CircuitHamiltonian& ch )
{
  ch.net_map.clear();
  for ( SpinIndex i = 0; i < ch.hamiltonian.num_spins(); ++i )
    ch.net_map.emplace( ch.hamiltonian.spin_name( i ), i );
}
} // namespace detail

inline CircuitHamiltonian clamp_nets( const CircuitHamiltonian& ch, const std::map<std::string, int>& bits )
{
  std::map<std::string, std::int8_t> spins;
  for ( const auto& [net, bit] : bits )
  {
    if ( ch.fixed.contains( net ) )
    {
      if ( ch.fixed.at( net ) != spin_of_bit( bit ) )
        throw std::invalid_argument( "net '" + net + "' is already clamped to a different value" );
      continue;
    }
    if ( !ch.net_map.contains( net ) )
      throw std::out_of_range( "unknown net '" + net + "'" );
    spins.emplace( net, spin_of_bit( bit ) );
  }
  CircuitHamiltonian out = ch;
  out.hamiltonian = clamp( ch.hamiltonian, spins );
  out.fixed.insert( spins.begin(), spins.end() );
  detail::rebuild_net_map( out );
  return out;
}

inline CircuitHamiltonian elaborate( const Netlist& nl, const GateLibrary& lib )
{
  validate( nl );
  CircuitHamiltonian ch;
  ch.netlist = nl;

  std::vector<ComposePart> parts;
  std::vector<std::string> universe = nl.nets;
  for ( std::size_t g = 0; g < nl.gates.size(); ++g )
  {
    const auto& gi = nl.gates[g];
    const GateBody& body = lib.at( gi.kind );
    std::vector<std::string> targets = gi.pins;
    for ( int a = 0; a < body.ancillas; ++a )
    {
      const std::string name = "g" + std::to_string( g ) + ".anc" + std::to_string( a );
      targets.push_back( name );
      universe.push_back( name );
      ch.ancillas[g].push_back( name );
    }
    parts.push_back( { &body.hamiltonian, std::move( targets ) } );
    ch.ground_energy += body.e_min;
  }
  ch.hamiltonian = compose( parts, std::move( universe ) );
  detail::rebuild_net_map( ch );
  if ( !nl.constants.empty() )
    ch = clamp_nets( ch, nl.constants );
  return ch;
}

/*! \brief n-bit ripple-carry adder Y = A + B from gates.
 *
 * Stage i: T = A^B, Y_i = T^C_i, U = A&B, V = T&C_i, C_{i+1} = U|V. The last
 * carry is Y_n; C0 is tied to 0.
 */
inline Netlist ripple_adder( int n )
{
  if ( n < 1 )
    throw std::invalid_argument( "adder width must be >= 1" );
  Netlist nl;
  auto s = []( const char* p, int i ) { return std::string{ p } + std::to_string( i ); };
  for ( int i = 0; i < n; ++i )
  {
    nl.nets.push_back( s( "A", i ) );
    nl.inputs["A"].push_back( s( "A", i ) );
  }
  for ( int i = 0; i < n; ++i )
  {
    nl.nets.push_back( s( "B", i ) );
    nl.inputs["B"].push_back( s( "B", i ) );
  }
  nl.nets.push_back( "C0" );
  nl.constants["C0"] = 0;
  for ( int i = 0; i < n; ++i )
  {
    const std::string a = s( "A", i ), b = s( "B", i ), c = s( "C", i ), t = s( "T", i ), u = s( "U", i ),
                      v = s( "V", i ), y = s( "Y", i );
    const std::string cout = i + 1 == n ? s( "Y", n ) : s( "C", i + 1 );
    for ( const auto& net : { t, u, v, y, cout } )
      nl.nets.push_back( net );
    nl.gates.push_back( { GateKind::XOR, { a, b, t } } );
    nl.gates.push_back( { GateKind::XOR, { t, c, y } } );
    nl.gates.push_back( { GateKind::AND, { a, b, u } } );
    nl.gates.push_back( { GateKind::AND, { t, c, v } } );
    nl.gates.push_back( { GateKind::OR, { u, v, cout } } );
  }
  for ( int i = 0; i <= n; ++i )
    nl.outputs["Y"].push_back( s( "Y", i ) );
  return nl;
}

/// Which nets to fix: whole interface words and/or individual nets (bits 0/1).
struct ClampMode
{
  std::map<std::string, std::uint64_t> words;
  std::map<std::string, int> nets;

  static ClampMode forward( std::uint64_t a, std::uint64_t b ) { return { { { "A", a }, { "B", b } }, {} }; }
  static ClampMode backward( std::uint64_t y ) { return { { { "Y", y } }, {} }; }
  static ClampMode partial( std::map<std::string, int> nets ) { return { {}, std::move( nets ) }; }
};

inline const std::vector<std::string>& word_nets( const Netlist& nl, const std::string& word )
{
  if ( auto it = nl.inputs.find( word ); it != nl.inputs.end() )
    return it->second;
  if ( auto it = nl.outputs.find( word ); it != nl.outputs.end() )
    return it->second;
  throw std::out_of_range( "unknown interface word '" + word + "'" );
}

/// Clamps interface words / nets; the ground energy is unchanged.
inline CircuitHamiltonian clamp_mode( const CircuitHamiltonian& ch, const ClampMode& mode )
{
  std::map<std::string, int> bits = mode.nets;
  for ( const auto& [word, value] : mode.words )
  {
    const auto& nets = word_nets( ch.netlist, word );
    if ( nets.size() < 64 && ( value >> nets.size() ) != 0 )
      throw std::invalid_argument( "value " + std::to_string( value ) + " does not fit in " +
                                   std::to_string( nets.size() ) + "-bit word " + word );
    for ( std::size_t i = 0; i < nets.size(); ++i )
      bits[nets[i]] = static_cast<int>( ( value >> i ) & 1u );
  }
  return clamp_nets( ch, bits );
}

/// Bits of every net (free and fixed) for a state over the free spins.
inline std::map<std::string, int> net_values( const CircuitHamiltonian& ch, const SpinState& free_state )
{
  if ( free_state.size() != ch.hamiltonian.num_spins() )
    throw std::invalid_argument( "state size does not match the circuit's free spins" );
  std::map<std::string, int> v;
  for ( const auto& [net, m] : ch.fixed )
    v[net] = m > 0 ? 1 : 0;
  for ( SpinIndex i = 0; i < free_state.size(); ++i )
    v[ch.hamiltonian.spin_name( i )] = free_state[i] > 0 ? 1 : 0;
  return v;
}

inline std::uint64_t read_word( const Netlist& nl, const std::map<std::string, int>& values, const std::string& word )
{
  const auto& nets = word_nets( nl, word );
  std::uint64_t w = 0;
  for ( std::size_t i = 0; i < nets.size() && i < 64; ++i )
    if ( values.at( nets[i] ) )
      w |= std::uint64_t{ 1 } << i;
  return w;
}

inline int eval_gate( GateKind k, int a, int b )
{
  switch ( k )
  {
  case GateKind::AND:
    return a & b;
  case GateKind::OR:
    return a | b;
  case GateKind::XOR:
    return a ^ b;
  case GateKind::XNOR:
    return 1 ^ a ^ b;
  case GateKind::NOT:
    return 1 ^ a;
  case GateKind::BUF:
    return a;
  }
  return 0;
}

/// Whether every gate's output net equals its Boolean function of the input nets.
inline bool gates_consistent( const Netlist& nl, const std::map<std::string, int>& values )
{
  for ( const auto& g : nl.gates )
  {
    const int a = values.at( g.pins[0] );
    const int b = g.pins.size() == 3 ? values.at( g.pins[1] ) : 0;
    if ( values.at( g.pins.back() ) != eval_gate( g.kind, a, b ) )
      return false;
  }
  return true;
}

/*! Netlist JSON:
 *   {"nets": [...], "gates": [{"kind": "XOR", "pins": ["A0","B0","T0"]}],
 *    "inputs": {"A": [...], "B": [...]}, "outputs": {"Y": [...]}, "constants": {"C0": 0}}
 */
inline nlohmann::ordered_json to_json( const Netlist& nl )
{
  nlohmann::ordered_json j;
  j["nets"] = nl.nets;
  auto gates = nlohmann::ordered_json::array();
  for ( const auto& g : nl.gates )
    gates.push_back( { { "kind", std::string{ to_string( g.kind ) } }, { "pins", g.pins } } );
  j["gates"] = std::move( gates );
  j["inputs"] = nl.inputs;
  j["outputs"] = nl.outputs;
  if ( !nl.constants.empty() )
    j["constants"] = nl.constants;
  return j;
}

inline Netlist netlist_from_json( const nlohmann::ordered_json& j )
{
  Netlist nl;
  nl.nets = j.at( "nets" ).get<std::vector<std::string>>();
  for ( const auto& g : j.at( "gates" ) )
    nl.gates.push_back( { parse_gate_kind( g.at( "kind" ).get<std::string>() ),
                          g.at( "pins" ).get<std::vector<std::string>>() } );
  if ( j.contains( "inputs" ) )
    nl.inputs = j.at( "inputs" ).get<std::map<std::string, std::vector<std::string>>>();
  if ( j.contains( "outputs" ) )
    nl.outputs = j.at( "outputs" ).get<std::map<std::string, std::vector<std::string>>>();
  if ( j.contains( "constants" ) )
    nl.constants = j.at( "constants" ).get<std::map<std::string, int>>();
  validate( nl );
  return nl;
}

inline Netlist load_netlist( const std::string& path )
{
  std::ifstream in{ path };
  if ( !in )
    throw std::runtime_error( "cannot open '" + path + "'" );
  std::stringstream ss;
  ss << in.rdbuf();
  return netlist_from_json( nlohmann::ordered_json::parse( ss.str() ) );
}

} // namespace invlogic
