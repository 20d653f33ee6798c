#include "test_util.hpp"

#include <invlogic/sc_emu.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <sstream>

using namespace invlogic;
using namespace invlogic::sc;

namespace
{
CircuitHamiltonian and_gate()
{
  Netlist nl;
  nl.nets = { "A", "B", "Y" };
  nl.gates.push_back( { GateKind::AND, { "A", "B", "Y" } } );
  return elaborate( nl, three_body_library() );
}

/// A generator whose next noise bit is `bit`.
XorShift32 rng_with_next( bool bit )
{
  for ( std::uint32_t s = 1;; ++s )
  {
    XorShift32 r( s ), probe( s );
    if ( probe.next_bit() == bit )
      return r;
  }
}
} // namespace

TEST( XorShift32, GoldenPrefix )
{
  // reference values from an independent implementation
  const std::array<std::uint32_t, 10> from_default{ 723471715u,  2497366906u, 2064144800u, 2008045182u,
                                                    3532304609u, 374114282u,  1350636274u, 691148861u,
                                                    746858951u,  2653896249u };
  const std::array<std::uint32_t, 10> from_one{ 270369u,     67634689u,  2647435461u, 307599695u,  2398689233u,
                                                745495504u,  632435482u, 435756210u,  2005365029u, 2916098932u };
  XorShift32 a, b( 1 );
  for ( std::size_t i = 0; i < 10; ++i )
  {
    EXPECT_EQ( a.next(), from_default[i] );
    EXPECT_EQ( b.next(), from_one[i] );
  }
  EXPECT_THROW( XorShift32( 0 ), std::invalid_argument );
  XorShift32 c( 1 );
  EXPECT_EQ( c.next_bit(), ( 270369u >> 31 ) != 0 );
}

TEST( ScEmu, MuxMultiplier )
{
  EXPECT_EQ( mux_mul( 1, 3 ), 3 );
  EXPECT_EQ( mux_mul( 0, 3 ), -3 );
  EXPECT_EQ( mux_mul( 0, -2 ), 2 );
}

TEST( ScEmu, XnorMultiplier )
{
  EXPECT_EQ( xnor_mul( 1, 1 ), 1 );
  EXPECT_EQ( xnor_mul( 0, 0 ), 1 );
  EXPECT_EQ( xnor_mul( 1, 0 ), 0 );
  EXPECT_EQ( xnor_mul( 0, 1 ), 0 );
}

TEST( ScEmu, AndGateSpinDatapath )
{
  const auto ih = to_integer( and_gate().hamiltonian );
  auto gates = build_network( ih, 3, 32 );
  auto& a = gates[0];
  ASSERT_EQ( a.two_body_taps.size(), 1u );
  ASSERT_EQ( a.three_body_taps.size(), 1u );
  a.gain = 2;
  a.counter.value = 0;
  // bits: A (unused), B = 1, Y = 0; noise +3
  auto rng = rng_with_next( true );
  const std::vector<std::uint8_t> bits{ 0, 1, 0 };
  EXPECT_EQ( a.input( bits, true ), 1 );
  EXPECT_EQ( gate_cycle( a, bits, rng ), 1 );
  EXPECT_EQ( a.counter.value, 2 );
}

TEST( ScEmu, ZeroCoefficientsLeaveCounter )
{
  SpinGateCircuit g;
  g.counter.value = -7;
  XorShift32 rng( 5 );
  EXPECT_EQ( gate_cycle( g, {}, rng ), 0 );
  EXPECT_EQ( g.counter.value, -7 );
}

TEST( ScEmu, CounterSaturates )
{
  SaturatedCounter c{ -32, 32 };
  c.add( -5 );
  EXPECT_EQ( c.value, -32 );
  EXPECT_EQ( c.bit, 0 );
  c.value = 30;
  c.add( 8 );
  EXPECT_EQ( c.value, 32 );
  EXPECT_EQ( c.bit, 1 );
}

TEST( ScEmu, IsolatedSpinRampsUp )
{
  SpinGateCircuit g;
  g.bias = 5;
  g.noise_weight = 3;
  g.gain = 2;
  g.counter = SaturatedCounter{ -32, 32, 0 };
  std::vector<SpinGateCircuit> net{ g };
  std::vector<XorShift32> rngs{ XorShift32( 99 ) };
  std::vector<std::uint8_t> bits{ 0 };
  const int limit = ( 32 + 2 * 2 - 1 ) / ( 2 * 2 ); // ceil(L / (gain * 2))
  int settled = -1;
  for ( int c = 1; c <= 100; ++c )
  {
    bits = network_cycle( net, bits, rngs );
    if ( bits[0] == 1 && settled < 0 )
      settled = c;
    if ( settled > 0 )
      ASSERT_EQ( bits[0], 1 );
  }
  EXPECT_GT( settled, 0 );
  EXPECT_LE( settled, limit );
}

TEST( ScEmu, BufferFollowsClampedDriver )
{
  Hamiltonian h{ { "i", "j" } };
  h.add_term( { "i", "j" }, 2 );
  const auto ih = to_integer( clamp( h, std::map<std::string, std::int8_t>{ { "j", 1 } } ) );
  auto net = build_network( ih, 3, 32 );
  net[0].gain = 2;
  std::vector<XorShift32> rngs{ XorShift32( 7 ) };
  std::vector<std::uint8_t> bits{ 0 };
  int ones = 0;
  for ( int c = 0; c < 300; ++c )
  {
    bits = network_cycle( net, bits, rngs );
    if ( c >= 200 )
      ones += bits[0];
  }
  EXPECT_GE( ones, 95 );
}

TEST( ScEmu, EmptyNetwork )
{
  std::vector<SpinGateCircuit> net;
  std::vector<XorShift32> rngs;
  EXPECT_TRUE( network_cycle( net, {}, rngs ).empty() );
}

TEST( ScEmuProperty, DatapathMatchesEngineField )
{
  std::mt19937 rng( 12 );
  for ( int k = 0; k < 30; ++k )
  {
    const std::size_t n = 3 + rng() % 5;
    const auto h = testutil::random_hamiltonian( rng, n, 3, 10 ).scaled( 12 );
    const auto ih = to_integer( h );
    const CompiledCircuit cc{ h, 0 };
    const std::int64_t w = rng() % 5;
    const auto net = build_network( ih, w, 32 );
    for ( std::size_t i = 0; i < n; ++i )
    {
      ASSERT_LE( net[i].two_body_taps.size() + net[i].three_body_taps.size(), 10u );
      for ( std::uint64_t b = 0; b < ( 1u << n ); ++b )
      {
        std::vector<std::uint8_t> bits( n );
        std::vector<std::int8_t> m( n + 1, 1 );
        for ( std::size_t j = 0; j < n; ++j )
        {
          bits[j] = ( b >> j ) & 1u;
          m[j] = bits[j] ? 1 : -1;
        }
        for ( bool up : { false, true } )
        {
          const std::int64_t in = net[i].input( bits, up );
          ASSERT_EQ( in, cc.field( i, m.data() ) * cc.scale() / ih.scale + ( up ? w : -w ) );
          ASSERT_EQ( Rational{ in - ( up ? w : -w ) }, local_field( h, SpinState{ std::vector<std::int8_t>( m.begin(), m.end() - 1 ) }, static_cast<SpinIndex>( i ) ) );
          ASSERT_LE( std::abs( in ), net[i].range() );
        }
      }
    }
  }
}

TEST( ScEmuProperty, XnorProductLaw )
{
  XorShift32 ra( 123 ), rb( 456 );
  const std::size_t N = 100000;
  BitStream a, b, p;
  // s_a = 0.5 -> P(1) = 0.75; s_b = -0.5 -> P(1) = 0.25
  for ( std::size_t i = 0; i < N; ++i )
  {
    a.bits.push_back( ra.next() < 0xC0000000u ? 1 : 0 );
    b.bits.push_back( rb.next() < 0x40000000u ? 1 : 0 );
    p.bits.push_back( static_cast<std::uint8_t>( xnor_mul( a.bits.back(), b.bits.back() ) ) );
  }
  const double sigma = std::sqrt( ( 1.0 - 0.25 * 0.25 ) / N );
  EXPECT_NEAR( p.value(), -0.25, 3 * sigma );
  EXPECT_NEAR( p.value(), a.value() * b.value(), 6 * sigma );
}

TEST( ScEmuProperty, AdderTreeStaysInRange )
{
  const auto ch = elaborate( ripple_adder( 2 ), three_body_library() );
  auto net = build_network( to_integer( ch.hamiltonian ), 3, 32 );
  XorShift32 rng( 3 );
  for ( auto& g : net )
  {
    IntegralStream s;
    s.r = g.range();
    for ( int k = 0; k < 2000; ++k )
    {
      std::vector<std::uint8_t> bits( net.size() );
      for ( auto& x : bits )
        x = rng.next_bit();
      s.values.push_back( g.input( bits, rng.next_bit() ) );
    }
    EXPECT_TRUE( s.in_range() );
  }
}

TEST( Equivalence, AndGateAndOneBitAdder )
{
  AnnealConfig cfg;
  for ( std::uint64_t seed : { 1u, 2u, 3u } )
  {
    cfg.seed = seed;
    EXPECT_TRUE( equivalence_check( and_gate(), cfg, 1000 ).identical );
    EXPECT_TRUE( equivalence_check( elaborate( ripple_adder( 1 ), three_body_library() ), cfg, 1000 ).identical );
    EXPECT_TRUE( equivalence_check( elaborate( ripple_adder( 2 ), two_body_library() ), cfg, 1000 ).identical );
  }
}

TEST( Equivalence, ScaledCoefficients )
{
  CircuitHamiltonian ch;
  ch.hamiltonian = Hamiltonian{ { "a", "b", "c" } };
  ch.hamiltonian.add_term( { "a", "b" }, Rational{ 1 } / 2 );
  ch.hamiltonian.add_term( { "a", "b", "c" }, Rational{ -3 } / 2 );
  const auto rep = equivalence_check( ch, AnnealConfig{}, 500 );
  EXPECT_TRUE( rep.identical );
  EXPECT_EQ( rep.scale, 2 );
}

TEST( Equivalence, MismatchedBoundIsReported )
{
  AnnealConfig cfg;
  const auto rep = equivalence_check( elaborate( ripple_adder( 1 ), three_body_library() ), cfg, 1000, 8 );
  EXPECT_FALSE( rep.identical );
  ASSERT_TRUE( rep.divergence_cycle.has_value() );
  ASSERT_TRUE( rep.divergence_spin.has_value() );
}

TEST( Equivalence, ZeroHamiltonianIsPureNoise )
{
  CircuitHamiltonian ch;
  ch.hamiltonian = Hamiltonian::anonymous( 4 );
  EXPECT_TRUE( equivalence_check( ch, AnnealConfig{}, 1000 ).identical );
}

TEST( Equivalence, RequiresIntegerGains )
{
  AnnealConfig cfg;
  cfg.i0_min = Rational{ 3 } / 2;
  EXPECT_THROW( equivalence_check( and_gate(), cfg, 10 ), std::invalid_argument );
}

TEST( Equivalence, TraceCsv )
{
  std::ostringstream os;
  equivalence_check( and_gate(), AnnealConfig{}, 2, std::nullopt, &os );
  const std::string s = os.str();
  EXPECT_EQ( s.rfind( "cycle,spin,counter,bit\n", 0 ), 0u );
  EXPECT_EQ( std::count( s.begin(), s.end(), '\n' ), 7 );
}
