#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace invlogic
{

/// SplitMix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t splitmix64( std::uint64_t& state )
{
  std::uint64_t z = ( state += 0x9E3779B97F4A7C15ull );
  z = ( z ^ ( z >> 30 ) ) * 0xBF58476D1CE4E5B9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94D049BB133111EBull;
  return z ^ ( z >> 31 );
}

/*! \brief Marsaglia 32-bit xorshift (13, 17, 5).
 *
 * The state is never zero. next() returns the new state; the noise bit is its
 * most significant bit.
 */
class XorShift32
{
public:
  constexpr XorShift32() = default;
  constexpr explicit XorShift32( std::uint32_t seed ) : state_( seed )
  {
    if ( seed == 0 )
      throw std::invalid_argument( "xorshift32 seed must be non-zero" );
  }

  constexpr std::uint32_t next() noexcept
  {
    std::uint32_t x = state_;
    x ^= x << 13;
    x ^= x >> 17;
    x ^= x << 5;
    state_ = x;
    return x;
  }

  constexpr bool next_bit() noexcept { return ( next() >> 31 ) != 0; }
  constexpr std::uint32_t state() const noexcept { return state_; }

  constexpr bool operator==( const XorShift32& ) const = default;

private:
  std::uint32_t state_ = 2463534242u;
};

/// Non-zero 32-bit seed drawn from a SplitMix64 stream.
constexpr std::uint32_t xorshift_seed( std::uint64_t& stream )
{
  const auto s = static_cast<std::uint32_t>( splitmix64( stream ) >> 32 );
  return s == 0 ? 0x9E3779B9u : s;
}

using MainRng = std::mt19937_64;

/// Uniform integer in [0, n) by rejection; independent of the standard library's distributions.
inline std::uint64_t uniform_below( MainRng& rng, std::uint64_t n )
{
  if ( n == 0 )
    throw std::invalid_argument( "uniform_below(0)" );
  const std::uint64_t limit = MainRng::max() - ( MainRng::max() % n + 1 ) % n;
  for ( ;; )
  {
    const std::uint64_t v = rng();
    if ( v <= limit )
      return v % n;
  }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01( MainRng& rng )
{
  return static_cast<double>( rng() >> 11 ) * 0x1.0p-53;
}

inline bool coin( MainRng& rng )
{
  return ( rng() >> 63 ) != 0;
}

} // namespace invlogic
