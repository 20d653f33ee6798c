#pragma once

#include "engine.hpp"
#include "hamiltonian.hpp"
#include "netlist.hpp"
#include "random.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace invlogic::sc
{

/// Bipolar stochastic stream: value = 2 * mean(bits) - 1.
struct BitStream
{
  std::vector<std::uint8_t> bits;

  double value() const
  {
    if ( bits.empty() )
      return 0.0;
    std::size_t ones = 0;
    for ( auto b : bits )
      ones += b;
    return 2.0 * static_cast<double>( ones ) / static_cast<double>( bits.size() ) - 1.0;
  }
};

/// Signed integral stream in [-r, r]; value = mean.
struct IntegralStream
{
  std::vector<std::int64_t> values;
  std::int64_t r = 0;

  bool in_range() const
  {
    return std::all_of( values.begin(), values.end(), [&]( auto v ) { return v >= -r && v <= r; } );
  }

  double value() const
  {
    if ( values.empty() )
      return 0.0;
    double s = 0;
    for ( auto v : values )
      s += static_cast<double>( v );
    return s / static_cast<double>( values.size() );
  }
};

/// m_j * c with m_j = 2 s - 1.
constexpr std::int64_t mux_mul( int s_bit, std::int64_t c ) noexcept { return s_bit ? c : -c; }

/// m_j * m_k as a bit.
constexpr int xnor_mul( int s_j, int s_k ) noexcept { return ( s_j == s_k ) ? 1 : 0; }

/*! \brief Saturated up/down counter in [-L, L].
 *
 * The output bit follows the sign of the value before saturation, so it is
 * identical to (value >= 0) whenever L >= 1.
 */
struct SaturatedCounter
{
  std::int64_t value = 0;
  std::int64_t bound = 32;
  int bit = 1;

  int add( std::int64_t delta )
  {
    const std::int64_t acc = value + delta;
    value = std::clamp( acc, -bound, bound );
    bit = acc >= 0 ? 1 : 0;
    return bit;
  }
};

struct TwoTap
{
  std::uint32_t j;
  std::int64_t c;
};

struct ThreeTap
{
  std::uint32_t j;
  std::uint32_t k;
  std::int64_t c;
};

/// One spin of the network: integer datapath, noise weight, gain and counter.
struct SpinGateCircuit
{
  std::int64_t bias = 0;
  std::vector<TwoTap> two_body_taps;
  std::vector<ThreeTap> three_body_taps;
  std::int64_t noise_weight = 0;
  std::int64_t gain = 1;
  SaturatedCounter counter;

  /// Adder-tree output for the given neighbour bits and noise bit.
  std::int64_t input( const std::vector<std::uint8_t>& bits, bool noise_up ) const
  {
    std::int64_t in = bias;
    for ( const auto& t : two_body_taps )
      in += mux_mul( bits[t.j], t.c );
    for ( const auto& t : three_body_taps )
      in += mux_mul( xnor_mul( bits[t.j], bits[t.k] ), t.c );
    return in + ( noise_up ? noise_weight : -noise_weight );
  }

  /// Bound r of the adder tree.
  std::int64_t range() const
  {
    std::int64_t r = std::abs( bias ) + noise_weight;
    for ( const auto& t : two_body_taps )
      r += std::abs( t.c );
    for ( const auto& t : three_body_taps )
      r += std::abs( t.c );
    return r;
  }
};

/// Updates one gate; returns the new output bit.
inline int gate_cycle( SpinGateCircuit& g, const std::vector<std::uint8_t>& bits, XorShift32& rng )
{
  const bool up = rng.next_bit();
  return g.counter.add( g.gain * g.input( bits, up ) );
}

/// Synchronous clock edge: every gate reads the same previous bit vector.
inline std::vector<std::uint8_t> network_cycle( std::vector<SpinGateCircuit>& gates,
                                                const std::vector<std::uint8_t>& bits,
                                                std::vector<XorShift32>& rngs )
{
  if ( gates.size() != bits.size() || rngs.size() != bits.size() )
    throw std::invalid_argument( "network wiring mismatch" );
  std::vector<std::uint8_t> next( bits.size() );
  for ( std::size_t i = 0; i < gates.size(); ++i )
    next[i] = static_cast<std::uint8_t>( gate_cycle( gates[i], bits, rngs[i] ) );
  return next;
}

/// Builds one SpinGateCircuit per spin from integer coefficients (order <= 3).
inline std::vector<SpinGateCircuit> build_network( const IntegerHamiltonian& ih, std::int64_t noise_weight,
                                                   std::int64_t counter_bound )
{
  std::vector<SpinGateCircuit> gates( ih.num_spins );
  for ( auto& g : gates )
  {
    g.noise_weight = noise_weight;
    g.counter.bound = counter_bound;
  }
  for ( const auto& t : ih.terms )
  {
    const auto& v = t.vars;
    if ( v.size() > 3 )
      throw std::invalid_argument( "the emulator supports interactions of at most three spins" );
    for ( std::size_t a = 0; a < v.size(); ++a )
    {
      auto& g = gates[v[a]];
      if ( v.size() == 1 )
        g.bias += t.coeff;
      else if ( v.size() == 2 )
        g.two_body_taps.push_back( { v[1 - a], t.coeff } );
      else
      {
        std::uint32_t o[2];
        int k = 0;
        for ( std::size_t b = 0; b < 3; ++b )
          if ( b != a )
            o[k++] = v[b];
        g.three_body_taps.push_back( { o[0], o[1], t.coeff } );
      }
    }
  }
  return gates;
}

/// Integer view of a rational that must be a whole number.
inline std::int64_t require_integer( const Rational& r, const char* what )
{
  if ( !is_integer( r ) )
    throw std::invalid_argument( std::string{ what } + " must be an integer in the emulator" );
  return to_int64( r );
}

struct EquivalenceReport
{
  bool identical = true;
  std::uint64_t cycles = 0;
  std::int64_t scale = 1;
  std::size_t spins = 0;
  std::optional<std::uint64_t> divergence_cycle;
  std::optional<std::size_t> divergence_spin;

  std::string message() const
  {
    if ( identical )
      return "identical over " + std::to_string( cycles ) + " cycles (" + std::to_string( spins ) +
             " spins, scale " + std::to_string( scale ) + ")";
    return "divergence at cycle " + std::to_string( *divergence_cycle ) + ", spin " +
           std::to_string( *divergence_spin );
  }
};

/*! \brief Runs the emulated network next to the engine's COUNTER mode.
 *
 * Both start from Engine::initial_state(cfg.seed) on the integer-scaled
 * circuit and advance one synchronous update per cycle under the pulsed i0
 * schedule. `emu_bound` overrides the emulator's counter depth (fault
 * injection). With `trace`, the emulator state is written as CSV
 * `cycle,spin,counter,bit` after every cycle.
 */
inline EquivalenceReport equivalence_check( const CircuitHamiltonian& ch, AnnealConfig cfg, std::uint64_t cycles,
                                            std::optional<std::int64_t> emu_bound = std::nullopt,
                                            std::ostream* trace = nullptr )
{
  cfg.mode = UpdateMode::Counter;
  cfg.update_order = UpdateOrder::Synchronous;
  cfg.tau = 1;
  cfg.validate();
  const std::int64_t w = require_integer( cfg.w_rnd, "w_rnd" );
  const std::int64_t g_min = require_integer( cfg.i0_min, "i0_min" );
  const std::int64_t g_max = require_integer( cfg.i0_max, "i0_max" );

  const IntegerHamiltonian ih = to_integer( ch.hamiltonian );
  const Hamiltonian scaled = ch.hamiltonian.scaled( Rational{ ih.scale } );
  const CompiledCircuit cc{ scaled, ch.ground_energy * Rational{ ih.scale } };
  const Engine engine{ cc, cfg };
  EngineState st = engine.initial_state( cfg.seed );

  const std::size_t n = ih.num_spins;
  auto gates = build_network( ih, w, emu_bound.value_or( cfg.counter_bound_L ) );
  std::vector<std::uint8_t> bits( n );
  std::vector<XorShift32> rngs = st.noise;
  for ( std::size_t i = 0; i < n; ++i )
  {
    bits[i] = st.spins[i] > 0 ? 1 : 0;
    gates[i].counter.value = st.counters[i];
    gates[i].counter.bit = bits[i];
  }

  EquivalenceReport rep;
  rep.scale = ih.scale;
  rep.spins = n;
  if ( trace )
    *trace << "cycle,spin,counter,bit\n";
  for ( std::uint64_t c = 0; c < cycles; ++c )
  {
    const bool low = ( c % static_cast<std::uint64_t>( 2 * cfg.half_period_T ) ) <
                     static_cast<std::uint64_t>( cfg.half_period_T );
    const std::int64_t gain = low ? g_min : g_max;
    for ( auto& g : gates )
      g.gain = gain;
    bits = network_cycle( gates, bits, rngs );
    engine.step( st, low ? cfg.i0_min : cfg.i0_max );
    if ( trace )
      for ( std::size_t i = 0; i < n; ++i )
        *trace << c << ',' << i << ',' << gates[i].counter.value << ',' << int{ bits[i] } << '\n';
    for ( std::size_t i = 0; i < n; ++i )
      if ( ( bits[i] != 0 ) != ( st.spins[i] > 0 ) || gates[i].counter.value != st.counters[i] )
      {
        rep.identical = false;
        rep.divergence_cycle = c;
        rep.divergence_spin = i;
        rep.cycles = c + 1;
        return rep;
      }
  }
  rep.cycles = cycles;
  return rep;
}

} // namespace invlogic::sc
