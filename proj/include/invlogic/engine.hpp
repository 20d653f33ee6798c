#pragma once

#include "hamiltonian.hpp"
#include "netlist.hpp"
#include "random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace invlogic
{

enum class UpdateMode
{
  Counter,
  Sign,
  Boltzmann
};

enum class UpdateOrder
{
  Synchronous,
  RandomSweep
};

inline std::string to_string( UpdateMode m )
{
  switch ( m )
  {
  case UpdateMode::Counter:
    return "counter";
  case UpdateMode::Sign:
    return "sign";
  case UpdateMode::Boltzmann:
    return "boltzmann";
  }
  return "?";
}

inline std::string to_string( UpdateOrder o )
{
  return o == UpdateOrder::Synchronous ? "sync" : "sweep";
}

inline UpdateMode parse_update_mode( const std::string& s )
{
  if ( s == "counter" )
    return UpdateMode::Counter;
  if ( s == "sign" )
    return UpdateMode::Sign;
  if ( s == "boltzmann" )
    return UpdateMode::Boltzmann;
  throw std::invalid_argument( "unknown update mode '" + s + "'" );
}

inline UpdateOrder parse_update_order( const std::string& s )
{
  if ( s == "sync" || s == "synchronous" )
    return UpdateOrder::Synchronous;
  if ( s == "sweep" || s == "random_sweep" )
    return UpdateOrder::RandomSweep;
  throw std::invalid_argument( "unknown update order '" + s + "'" );
}

/*! \brief Annealing schedule and p-bit update parameters.
 *
 * One shot is half_period_T cycles at i0_min followed by half_period_T cycles
 * at i0_max, with one update step every tau cycles.
 */
struct AnnealConfig
{
  Rational i0_min{ 2 };
  Rational i0_max{ 4 };
  int half_period_T = 100;
  int n_shot_max = 16;
  Rational w_rnd{ 3 };
  int tau = 1;
  UpdateMode mode = UpdateMode::Counter;
  UpdateOrder update_order = UpdateOrder::Synchronous;
  int counter_bound_L = 32;
  std::uint64_t seed = 1;
  bool record_trace = false;

  void validate() const
  {
    if ( i0_min <= 0 || i0_max <= 0 )
      throw std::invalid_argument( "i0 values must be positive" );
    if ( i0_min > i0_max )
      throw std::invalid_argument( "i0_min must not exceed i0_max" );
    if ( half_period_T < 1 )
      throw std::invalid_argument( "half period T must be >= 1" );
    if ( n_shot_max < 1 )
      throw std::invalid_argument( "n_shot_max must be >= 1" );
    if ( w_rnd < 0 )
      throw std::invalid_argument( "w_rnd must be non-negative" );
    if ( tau < 1 || tau > half_period_T )
      throw std::invalid_argument( "tau must lie in [1, T]" );
    if ( counter_bound_L < 0 )
      throw std::invalid_argument( "counter bound must be non-negative" );
  }

  int steps_per_half() const { return half_period_T / tau; }
};

/*! \brief Integer-scaled view of a Hamiltonian for fast local fields.
 *
 * Every coefficient, the offset and the ground energy are multiplied by the
 * least common denominator `scale`. Terms of order <= 3 are stored as taps
 * with two "other" spins, padding with a sentinel spin fixed at +1.
 */
class CompiledCircuit
{
public:
  struct Tap
  {
    std::int64_t coeff;
    std::uint32_t j;
    std::uint32_t k;
  };

  CompiledCircuit( const Hamiltonian& h, const Rational& ground_energy ) : names_( h.spin_names() )
  {
    n_ = h.num_spins();
    std::vector<Rational> values{ h.offset(), ground_energy };
    for ( const auto& [m, c] : h.terms() )
      values.push_back( c );
    const BigInt big_scale = common_denominator( values );
    scale_ = to_int64( big_scale );
    const Rational rs{ big_scale };
    offset_ = to_int64( Rational{ h.offset() * rs } );
    ground_ = to_int64( Rational{ ground_energy * rs } );
    max_order_ = h.max_order();

    const auto sentinel = static_cast<std::uint32_t>( n_ );
    std::vector<std::vector<Tap>> per_spin( n_ );
    std::vector<std::vector<std::pair<std::int64_t, std::vector<std::uint32_t>>>> generic( n_ );
    for ( const auto& [m, c] : h.terms() )
    {
      const std::int64_t ci = to_int64( Rational{ c * rs } );
      terms_.push_back( { m.vars(), ci } );
      for ( auto i : m.vars() )
      {
        std::vector<std::uint32_t> others;
        for ( auto v : m.vars() )
          if ( v != i )
            others.push_back( v );
        if ( max_order_ <= 3 )
        {
          while ( others.size() < 2 )
            others.push_back( sentinel );
          per_spin[i].push_back( { ci, others[0], others[1] } );
        }
        else
          generic[i].push_back( { ci, std::move( others ) } );
      }
    }
    tap_begin_.push_back( 0 );
    for ( std::size_t i = 0; i < n_; ++i )
    {
      for ( const auto& t : per_spin[i] )
        taps_.push_back( t );
      tap_begin_.push_back( static_cast<std::uint32_t>( taps_.size() ) );
    }
    generic_ = std::move( generic );
  }

  explicit CompiledCircuit( const CircuitHamiltonian& ch ) : CompiledCircuit( ch.hamiltonian, ch.ground_energy ) {}

  std::size_t num_spins() const noexcept { return n_; }
  std::int64_t scale() const noexcept { return scale_; }
  std::int64_t offset() const noexcept { return offset_; }
  std::int64_t ground() const noexcept { return ground_; }
  std::size_t max_order() const noexcept { return max_order_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<IntegerHamiltonian::Term>& terms() const noexcept { return terms_; }

  std::span<const Tap> taps( std::size_t i ) const
  {
    return { taps_.data() + tap_begin_[i], taps_.data() + tap_begin_[i + 1] };
  }

  /// scale * local field of spin i; `m` holds n spins followed by the +1 sentinel.
  std::int64_t field( std::size_t i, const std::int8_t* m ) const
  {
    std::int64_t f = 0;
    if ( max_order_ <= 3 )
    {
      const Tap* t = taps_.data() + tap_begin_[i];
      const Tap* end = taps_.data() + tap_begin_[i + 1];
      for ( ; t != end; ++t )
        f += ( m[t->j] * m[t->k] ) > 0 ? t->coeff : -t->coeff;
      return f;
    }
    for ( const auto& [c, others] : generic_[i] )
    {
      int p = 1;
      for ( auto v : others )
        p *= m[v];
      f += p * c;
    }
    return f;
  }

  /// scale * energy.
  std::int64_t energy( const std::int8_t* m ) const
  {
    std::int64_t e = offset_;
    for ( const auto& t : terms_ )
    {
      int p = 1;
      for ( auto v : t.vars )
        p *= m[v];
      e -= p * t.coeff;
    }
    return e;
  }

private:
  std::size_t n_ = 0;
  std::int64_t scale_ = 1;
  std::int64_t offset_ = 0;
  std::int64_t ground_ = 0;
  std::size_t max_order_ = 0;
  std::vector<std::string> names_;
  std::vector<IntegerHamiltonian::Term> terms_;
  std::vector<Tap> taps_;
  std::vector<std::uint32_t> tap_begin_;
  std::vector<std::vector<std::pair<std::int64_t, std::vector<std::uint32_t>>>> generic_;
};

/*! \brief Mutable state of one annealing run.
 *
 * `spins` has one entry per free spin plus a trailing sentinel fixed at +1.
 * In COUNTER mode with L >= 1, spins[i] == +1 iff counters[i] >= 0.
 */
struct EngineState
{
  std::vector<std::int8_t> spins;
  std::vector<std::int32_t> counters;
  std::vector<XorShift32> noise;
  MainRng rng;
  std::uint64_t cycle = 0;
  std::uint64_t steps = 0;
  std::uint64_t shot = 0;
  std::vector<std::int8_t> scratch;

  std::size_t size() const noexcept { return counters.size(); }

  SpinState spin_state() const
  {
    return SpinState{ std::vector<std::int8_t>( spins.begin(), spins.begin() + static_cast<std::ptrdiff_t>( size() ) ) };
  }
};

struct TrialResult
{
  bool converged = false;
  int shots_used = 0;
  Rational final_energy{ 0 };
  SpinState final_state;
  std::vector<Rational> energy_trace;
};

/*! \brief p-bit annealer over one compiled circuit.
 *
 * Per step and spin: I = field + w_rnd * sigma with sigma = +-1 from the spin's
 * own xorshift stream (MSB). Then
 *   COUNTER:   acc = counter + round(i0 * I) (halves away from zero), counter =
 *              clamp(acc, -L, L), m = +1 iff acc >= 0
 *   SIGN:      m = +1 iff I >= 0
 *   BOLTZMANN: m = +1 with probability (1 + tanh(i0 * I)) / 2
 * SYNCHRONOUS reads every field from the previous state; RANDOM_SWEEP updates
 * in place along a fresh random permutation.
 */
class Engine
{
public:
  Engine( const CompiledCircuit& circuit, AnnealConfig cfg ) : circuit_( &circuit ), cfg_( std::move( cfg ) )
  {
    cfg_.validate();
    const Rational w = cfg_.w_rnd;
    w_den_ = to_int64( den_of( w ) );
    w_num_scaled_ = to_int64( Rational{ Rational{ num_of( w ) } * Rational{ circuit.scale() } } );
    i0_min_ = split( cfg_.i0_min );
    i0_max_ = split( cfg_.i0_max );
  }

  const AnnealConfig& config() const noexcept { return cfg_; }
  const CompiledCircuit& circuit() const noexcept { return *circuit_; }

  /// Random initial spins and consistent counters; per-spin noise streams from the seed.
  EngineState initial_state( std::uint64_t seed ) const
  {
    const std::size_t n = circuit_->num_spins();
    EngineState st;
    std::uint64_t stream = seed;
    st.rng.seed( splitmix64( stream ) );
    st.noise.reserve( n );
    for ( std::size_t i = 0; i < n; ++i )
      st.noise.emplace_back( xorshift_seed( stream ) );
    st.spins.assign( n + 1, 1 );
    st.counters.assign( n, 0 );
    st.scratch.assign( n + 1, 1 );
    const auto L = static_cast<std::uint64_t>( cfg_.counter_bound_L );
    for ( std::size_t i = 0; i < n; ++i )
    {
      const bool up = coin( st.rng );
      st.spins[i] = up ? 1 : -1;
      if ( L > 0 )
        st.counters[i] = up ? static_cast<std::int32_t>( uniform_below( st.rng, L + 1 ) )
                            : -1 - static_cast<std::int32_t>( uniform_below( st.rng, L ) );
    }
    return st;
  }

  /// One update step at inverse temperature i0.
  void step( EngineState& st, const Rational& i0 ) const { step( st, split( i0 ) ); }

  /// T steps at i0_min then T steps at i0_max (with tau cycles per step).
  void run_shot( EngineState& st ) const
  {
    const int half = cfg_.steps_per_half();
    for ( int s = 0; s < half; ++s )
      step( st, i0_min_ );
    for ( int s = 0; s < half; ++s )
      step( st, i0_max_ );
    ++st.shot;
  }

  /// i0 in effect at a given cycle of the pulsed schedule.
  const Rational& i0_at_cycle( std::uint64_t cycle ) const
  {
    const auto period = static_cast<std::uint64_t>( 2 * cfg_.half_period_T );
    return ( cycle % period ) < static_cast<std::uint64_t>( cfg_.half_period_T ) ? cfg_.i0_min : cfg_.i0_max;
  }

  std::int64_t scaled_energy( const EngineState& st ) const { return circuit_->energy( st.spins.data() ); }

  Rational energy( const EngineState& st ) const
  {
    return Rational{ scaled_energy( st ) } / Rational{ circuit_->scale() };
  }

  bool at_ground( const EngineState& st ) const { return scaled_energy( st ) == circuit_->ground(); }

  /// Shots until the end-of-shot energy reaches the ground energy or the budget runs out.
  TrialResult run_trial( std::uint64_t seed ) const
  {
    EngineState st = initial_state( seed );
    TrialResult r;
    if ( circuit_->num_spins() == 0 )
    {
      r.final_energy = energy( st );
      r.converged = at_ground( st );
      r.final_state = st.spin_state();
      return r;
    }
    for ( int shot = 1; shot <= cfg_.n_shot_max; ++shot )
    {
      run_shot( st );
      r.shots_used = shot;
      const bool done = at_ground( st );
      if ( cfg_.record_trace )
        r.energy_trace.push_back( energy( st ) );
      if ( done )
      {
        r.converged = true;
        break;
      }
    }
    r.final_energy = energy( st );
    r.final_state = st.spin_state();
    return r;
  }

private:
  struct Gain
  {
    std::int64_t num;
    std::int64_t den;
  };

  static Gain split( const Rational& r ) { return { to_int64( num_of( r ) ), to_int64( den_of( r ) ) }; }

  void step( EngineState& st, Gain i0 ) const
  {
    const std::size_t n = circuit_->num_spins();
    const std::int64_t L = cfg_.counter_bound_L;
    // I * scale * w_den = field * w_den + sigma * w_num * scale
    const std::int64_t denom = i0.den * circuit_->scale() * w_den_;

    auto update = [&]( std::size_t i, const std::int8_t* read ) -> std::int8_t {
      const std::int64_t f = circuit_->field( i, read );
      const bool up_noise = st.noise[i].next_bit();
      const std::int64_t in = f * w_den_ + ( up_noise ? w_num_scaled_ : -w_num_scaled_ );
      switch ( cfg_.mode )
      {
      case UpdateMode::Counter:
      {
        const std::int64_t acc = st.counters[i] + round_half_away( i0.num * in, denom );
        st.counters[i] = static_cast<std::int32_t>( std::clamp( acc, -L, L ) );
        return acc >= 0 ? 1 : -1;
      }
      case UpdateMode::Sign:
        return in >= 0 ? 1 : -1;
      case UpdateMode::Boltzmann:
      {
        const double x = static_cast<double>( i0.num * in ) / static_cast<double>( denom );
        return uniform01( st.rng ) < 0.5 * ( 1.0 + std::tanh( x ) ) ? 1 : -1;
      }
      }
      return 1;
    };

    if ( cfg_.update_order == UpdateOrder::Synchronous )
    {
      std::copy( st.spins.begin(), st.spins.end(), st.scratch.begin() );
      for ( std::size_t i = 0; i < n; ++i )
        st.spins[i] = update( i, st.scratch.data() );
    }
    else
    {
      auto& order = perm_scratch( n );
      for ( std::size_t i = 0; i < n; ++i )
        order[i] = static_cast<std::uint32_t>( i );
      for ( std::size_t i = n; i > 1; --i )
        std::swap( order[i - 1], order[uniform_below( st.rng, i )] );
      for ( auto i : order )
        st.spins[i] = update( i, st.spins.data() );
    }
    st.cycle += static_cast<std::uint64_t>( cfg_.tau );
    ++st.steps;
  }

  static std::vector<std::uint32_t>& perm_scratch( std::size_t n )
  {
    thread_local std::vector<std::uint32_t> order;
    order.resize( n );
    return order;
  }

  const CompiledCircuit* circuit_;
  AnnealConfig cfg_;
  std::int64_t w_den_ = 1;
  std::int64_t w_num_scaled_ = 0;
  Gain i0_min_{ 2, 1 };
  Gain i0_max_{ 4, 1 };
};

/// Trial t of a run with base seed s uses seed s ^ t.
constexpr std::uint64_t trial_seed( std::uint64_t base, std::uint64_t trial_index )
{
  return base ^ trial_index;
}

/// Runs fn(0..count-1) across worker threads; results must be written by index.
inline void parallel_for( std::size_t count, unsigned threads, const std::function<void( std::size_t )>& fn )
{
  if ( threads == 0 )
    threads = std::max( 1u, std::thread::hardware_concurrency() );
  if ( threads <= 1 || count <= 1 )
  {
    for ( std::size_t i = 0; i < count; ++i )
      fn( i );
    return;
  }
  std::atomic<std::size_t> next{ 0 };
  std::vector<std::thread> pool;
  for ( unsigned t = 0; t < threads && t < count; ++t )
    pool.emplace_back( [&] {
      for ( std::size_t i = next++; i < count; i = next++ )
        fn( i );
    } );
  for ( auto& th : pool )
    th.join();
}

/// run_trial on an already clamped circuit.
inline TrialResult run_trial( const CircuitHamiltonian& ch, const AnnealConfig& cfg, std::uint64_t seed )
{
  const CompiledCircuit cc{ ch };
  return Engine{ cc, cfg }.run_trial( seed );
}

inline TrialResult run_trial( const CircuitHamiltonian& ch, const AnnealConfig& cfg, const ClampMode& clamps,
                              std::uint64_t seed )
{
  return run_trial( clamp_mode( ch, clamps ), cfg, seed );
}

/// Independent trials with seeds trial_seed(cfg.seed, t); deterministic for any thread count.
inline std::vector<TrialResult> run_trials( const CircuitHamiltonian& ch, const AnnealConfig& cfg, std::size_t trials,
                                            unsigned threads = 0 )
{
  const CompiledCircuit cc{ ch };
  const Engine engine{ cc, cfg };
  std::vector<TrialResult> out( trials );
  parallel_for( trials, threads, [&]( std::size_t t ) { out[t] = engine.run_trial( trial_seed( cfg.seed, t ) ); } );
  return out;
}

/*! \brief Empirical distribution of end-of-shot states.
 *
 * One chain: 10 burn-in shots, then `n_samples` shots, recording the state
 * over the free spins after each.
 */
inline std::map<SpinState, double> sample_distribution( const CircuitHamiltonian& ch, const AnnealConfig& cfg,
                                                        std::size_t n_samples )
{
  if ( ch.hamiltonian.num_spins() > 16 )
    throw std::invalid_argument( "sample_distribution is limited to 16 free spins" );
  const CompiledCircuit cc{ ch };
  const Engine engine{ cc, cfg };
  EngineState st = engine.initial_state( cfg.seed );
  for ( int b = 0; b < 10; ++b )
    engine.run_shot( st );
  std::map<SpinState, std::size_t> counts;
  for ( std::size_t s = 0; s < n_samples; ++s )
  {
    engine.run_shot( st );
    ++counts[st.spin_state()];
  }
  std::map<SpinState, double> freq;
  for ( const auto& [state, c] : counts )
    freq.emplace( state, static_cast<double>( c ) / static_cast<double>( n_samples ) );
  return freq;
}

inline std::map<SpinState, double> sample_distribution( const CircuitHamiltonian& ch, const AnnealConfig& cfg,
                                                        const ClampMode& clamps, std::size_t n_samples )
{
  return sample_distribution( clamp_mode( ch, clamps ), cfg, n_samples );
}

} // namespace invlogic
