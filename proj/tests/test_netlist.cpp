#include <invlogic/landscape.hpp>
#include <invlogic/netlist.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace invlogic;

namespace
{
/// (A, B, Y) words of a full-universe state of a clamped circuit.
std::tuple<std::uint64_t, std::uint64_t, std::uint64_t> words_of( const CircuitHamiltonian& ch, const SpinState& s )
{
  const auto v = net_values( ch, s );
  return { read_word( ch.netlist, v, "A" ), read_word( ch.netlist, v, "B" ), read_word( ch.netlist, v, "Y" ) };
}

/// Ground states as free-spin states.
std::vector<SpinState> grounds( const CircuitHamiltonian& ch, Rational* e_min = nullptr )
{
  const auto st = enumerate_landscape( ch.hamiltonian );
  if ( e_min )
    *e_min = st.e_min;
  return st.ground_states;
}
} // namespace

TEST( Netlist, OneBitAdderStructure )
{
  const auto nl = ripple_adder( 1 );
  EXPECT_EQ( nl.gates.size(), 5u );
  EXPECT_EQ( std::set<std::string>( nl.nets.begin(), nl.nets.end() ),
             ( std::set<std::string>{ "A0", "B0", "C0", "T0", "U0", "V0", "Y0", "Y1" } ) );
  EXPECT_EQ( nl.outputs.at( "Y" ), ( std::vector<std::string>{ "Y0", "Y1" } ) );
}

TEST( Netlist, FourBitAdderSpinCount )
{
  const auto nl = ripple_adder( 4 );
  EXPECT_EQ( nl.gates.size(), 20u );
  const auto ch = elaborate( nl, three_body_library() );
  EXPECT_EQ( ch.hamiltonian.num_spins(), 28u );
  EXPECT_EQ( ch.ground_energy, Rational{ -40 } );
  EXPECT_EQ( ch.fixed.at( "C0" ), -1 );
}

TEST( Netlist, EmptyNetlist )
{
  const auto ch = elaborate( Netlist{}, three_body_library() );
  EXPECT_EQ( ch.hamiltonian.num_spins(), 0u );
  EXPECT_EQ( ch.ground_energy, Rational{ 0 } );
}

TEST( Netlist, SingleAndGate )
{
  Netlist nl;
  nl.nets = { "A", "B", "Y" };
  nl.gates.push_back( { GateKind::AND, { "A", "B", "Y" } } );
  const auto ch = elaborate( nl, three_body_library() );
  EXPECT_EQ( ch.hamiltonian, three_body_library().at( GateKind::AND ).hamiltonian );
  EXPECT_EQ( ch.ground_energy, Rational{ -2 } );

  const auto back = clamp_mode( ch, ClampMode::partial( { { "Y", 0 } } ) );
  std::set<std::string> g;
  for ( const auto& s : grounds( back ) )
    g.insert( s.bit_string() );
  EXPECT_EQ( g, ( std::set<std::string>{ "00", "10", "01" } ) );

  const auto fwd = clamp_mode( ch, ClampMode::partial( { { "A", 1 }, { "B", 1 } } ) );
  const auto gs = grounds( fwd );
  ASSERT_EQ( gs.size(), 1u );
  EXPECT_EQ( gs[0].bit_string(), "1" );
}

TEST( Netlist, FullAdderGroundStatesAreConsistentAssignments )
{
  // free-standing full adder with carry-in as an ordinary net
  Netlist nl;
  nl.nets = { "a", "b", "cin", "t", "s", "u", "v", "cout" };
  nl.gates = { { GateKind::XOR, { "a", "b", "t" } },
               { GateKind::XOR, { "t", "cin", "s" } },
               { GateKind::AND, { "a", "b", "u" } },
               { GateKind::AND, { "t", "cin", "v" } },
               { GateKind::OR, { "u", "v", "cout" } } };
  const auto ch = elaborate( nl, three_body_library() );
  EXPECT_EQ( ch.hamiltonian.num_spins(), 8u );
  EXPECT_EQ( ch.ground_energy, Rational{ -10 } );
  Rational e_min;
  const auto gs = grounds( ch, &e_min );
  EXPECT_EQ( e_min, Rational{ -10 } );
  EXPECT_EQ( gs.size(), 8u );
  for ( const auto& s : gs )
    EXPECT_TRUE( gates_consistent( nl, net_values( ch, s ) ) );
}

TEST( Netlist, ForwardAdderHasUniqueSum )
{
  const auto ch = clamp_mode( elaborate( ripple_adder( 4 ), three_body_library() ), ClampMode::forward( 3, 5 ) );
  Rational e_min;
  const auto gs = grounds( ch, &e_min );
  ASSERT_EQ( gs.size(), 1u );
  EXPECT_EQ( e_min, ch.ground_energy );
  EXPECT_EQ( std::get<2>( words_of( ch, gs[0] ) ), 8u );
}

TEST( NetlistProperty, ForwardGroundStatesAreExactlyTheSum )
{
  for ( int n = 1; n <= 2; ++n )
    for ( auto order : { BodyOrder::Two, BodyOrder::Three } )
    {
      const auto base = elaborate( ripple_adder( n ), library_for( order ) );
      for ( std::uint64_t a = 0; a < ( 1u << n ); ++a )
        for ( std::uint64_t b = 0; b < ( 1u << n ); ++b )
        {
          const auto ch = clamp_mode( base, ClampMode::forward( a, b ) );
          Rational e_min;
          const auto gs = grounds( ch, &e_min );
          ASSERT_EQ( e_min, ch.ground_energy );
          ASSERT_EQ( gs.size(), 1u );
          ASSERT_EQ( std::get<2>( words_of( ch, gs[0] ) ), a + b );
          ASSERT_TRUE( gates_consistent( ch.netlist, net_values( ch, gs[0] ) ) );
        }
    }
}

TEST( NetlistProperty, BackwardCompleteness )
{
  for ( int n = 1; n <= 2; ++n )
  {
    const auto base = elaborate( ripple_adder( n ), three_body_library() );
    for ( std::uint64_t y = 0; y < ( 2u << n ); ++y )
    {
      const auto ch = clamp_mode( base, ClampMode::backward( y ) );
      Rational e_min;
      const auto gs = grounds( ch, &e_min );
      std::set<std::pair<std::uint64_t, std::uint64_t>> got, want;
      for ( std::uint64_t a = 0; a < ( 1u << n ); ++a )
        for ( std::uint64_t b = 0; b < ( 1u << n ); ++b )
          if ( a + b == y )
            want.emplace( a, b );
      if ( want.empty() )
      {
        ASSERT_GT( e_min, ch.ground_energy );
        continue;
      }
      ASSERT_EQ( e_min, ch.ground_energy );
      for ( const auto& s : gs )
      {
        const auto [a, b, yy] = words_of( ch, s );
        got.emplace( a, b );
      }
      ASSERT_EQ( got, want ) << "y=" << y;
    }
  }
}

TEST( NetlistProperty, LibrariesAgreeOnInterfaceProjection )
{
  const auto nl = ripple_adder( 1 );
  auto project = [&]( BodyOrder order ) {
    const auto ch = elaborate( nl, library_for( order ) );
    std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> out;
    for ( const auto& s : grounds( ch ) )
      out.insert( words_of( ch, s ) );
    return out;
  };
  const auto two = project( BodyOrder::Two );
  EXPECT_EQ( two, project( BodyOrder::Three ) );
  EXPECT_EQ( two.size(), 4u );
}

TEST( Netlist, UnachievableSumHasNoGroundState )
{
  const auto ch = clamp_mode( elaborate( ripple_adder( 4 ), three_body_library() ), ClampMode::backward( 31 ) );
  EXPECT_EQ( ch.hamiltonian.num_spins(), 23u );
  EXPECT_GT( enumerate_landscape( ch.hamiltonian ).e_min, ch.ground_energy );
}

TEST( Netlist, ClampErrors )
{
  const auto ch = elaborate( ripple_adder( 2 ), three_body_library() );
  EXPECT_THROW( clamp_mode( ch, ClampMode::partial( { { "nope", 1 } } ) ), std::out_of_range );
  EXPECT_THROW( clamp_mode( ch, ClampMode::forward( 4, 0 ) ), std::invalid_argument );
  EXPECT_THROW( clamp_mode( ch, ClampMode::partial( { { "A0", 2 } } ) ), std::invalid_argument );
  EXPECT_THROW( clamp_mode( ch, ClampMode::partial( { { "C0", 1 } } ) ), std::invalid_argument );
}

TEST( Netlist, AncillasAreInternalNets )
{
  const auto ch = elaborate( ripple_adder( 1 ), two_body_library() );
  ASSERT_EQ( ch.ancillas.size(), 2u );
  EXPECT_EQ( ch.ancillas.at( 0 ), ( std::vector<std::string>{ "g0.anc0" } ) );
  EXPECT_TRUE( ch.net_map.contains( "g1.anc0" ) );
  for ( const auto& [w, nets] : ch.netlist.inputs )
    for ( const auto& n : nets )
      EXPECT_EQ( n.find( "anc" ), std::string::npos );
}

TEST( NetlistJson, RoundTrip )
{
  const auto nl = ripple_adder( 3 );
  const auto back = netlist_from_json( to_json( nl ) );
  EXPECT_EQ( back.nets, nl.nets );
  EXPECT_EQ( back.inputs, nl.inputs );
  EXPECT_EQ( back.outputs, nl.outputs );
  EXPECT_EQ( back.constants, nl.constants );
  ASSERT_EQ( back.gates.size(), nl.gates.size() );
  for ( std::size_t g = 0; g < nl.gates.size(); ++g )
  {
    EXPECT_EQ( back.gates[g].kind, nl.gates[g].kind );
    EXPECT_EQ( back.gates[g].pins, nl.gates[g].pins );
  }
}

TEST( Netlist, ValidationRejectsBadPins )
{
  Netlist nl;
  nl.nets = { "A", "Y" };
  nl.gates.push_back( { GateKind::AND, { "A", "Y" } } );
  EXPECT_THROW( elaborate( nl, three_body_library() ), std::invalid_argument );
  nl.gates = { { GateKind::NOT, { "A", "Z" } } };
  EXPECT_THROW( elaborate( nl, three_body_library() ), std::exception );
}
