#pragma once

#include "hamiltonian.hpp"

#include <bit>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

namespace invlogic
{

/// Thrown when exhaustive enumeration would exceed the free-spin cap.
class EnumerationCapExceeded : public std::runtime_error
{
public:
  EnumerationCapExceeded( std::size_t free_spins, std::size_t cap )
      : std::runtime_error( "exhaustive enumeration refused: " + std::to_string( free_spins ) +
                            " free spins exceeds cap of " + std::to_string( cap ) + "; sample instead" ) {}
};

struct LandscapeOptions
{
  std::size_t max_free_spins = 24;
  /// Ground states beyond this count are counted but not materialized.
  std::size_t max_ground_states = 1u << 16;
};

/*! \brief Exact statistics of the energy landscape.
 *
 * Ground states are full assignments over the Hamiltonian's universe (clamped
 * spins carry their fixed values) in ascending order of the free-spin bit index.
 */
struct LandscapeStats
{
  Rational e_min{ 0 };
  Rational delta_e_min{ 0 };
  Rational delta_e_max{ 0 };
  std::size_t n_levels = 0;
  std::vector<SpinState> ground_states;
  std::uint64_t ground_state_count = 0;
  std::vector<SpinIndex> free_spins;
};

inline LandscapeStats enumerate_landscape( const Hamiltonian& h, const SpinClamps& clamps = {},
                                           const LandscapeOptions& opt = {} )
{
  const Hamiltonian free_h = clamp( h, clamps );
  const std::size_t n = free_h.num_spins();
  if ( n > opt.max_free_spins || n >= 63 )
    throw EnumerationCapExceeded( n, opt.max_free_spins );

  LandscapeStats stats;
  for ( SpinIndex i = 0; i < h.num_spins(); ++i )
    if ( !clamps.contains( i ) )
      stats.free_spins.push_back( i );

  const IntegerHamiltonian ih = to_integer( free_h );
  struct MaskTerm
  {
    std::uint64_t mask;
    std::int64_t coeff;
  };
  std::vector<MaskTerm> terms;
  terms.reserve( ih.terms.size() );
  for ( const auto& t : ih.terms )
  {
    std::uint64_t mask = 0;
    for ( auto v : t.vars )
      mask |= std::uint64_t{ 1 } << v;
    terms.push_back( { mask, t.coeff } );
  }

  // bit set in `neg` <=> spin is -1; a term flips sign on odd overlap.
  auto energy_at = [&]( std::uint64_t neg ) {
    std::int64_t e = ih.offset;
    for ( const auto& t : terms )
      e -= ( std::popcount( t.mask & neg ) & 1 ) ? -t.coeff : t.coeff;
    return e;
  };

  std::set<std::int64_t> levels;
  std::int64_t e_min = 0;
  std::vector<std::uint64_t> grounds;
  const std::uint64_t total = std::uint64_t{ 1 } << n;
  const std::uint64_t all = total - 1;
  for ( std::uint64_t k = 0; k < total; ++k )
  {
    const std::int64_t e = energy_at( ~k & all );
    levels.insert( e );
    if ( k == 0 || e < e_min )
    {
      e_min = e;
      grounds.clear();
      stats.ground_state_count = 0;
    }
    if ( e == e_min )
    {
      ++stats.ground_state_count;
      if ( grounds.size() < opt.max_ground_states )
        grounds.push_back( k );
    }
  }

  const Rational scale{ ih.scale };
  stats.n_levels = levels.size();
  stats.e_min = Rational{ *levels.begin() } / scale;
  stats.delta_e_max = Rational{ *levels.rbegin() - *levels.begin() } / scale;
  stats.delta_e_min =
      levels.size() > 1 ? Rational{ *std::next( levels.begin() ) - *levels.begin() } / scale : Rational{ 0 };

  for ( auto k : grounds )
  {
    std::vector<std::int8_t> full( h.num_spins() );
    for ( const auto& [i, v] : clamps )
      full[i] = v;
    for ( std::size_t j = 0; j < n; ++j )
      full[stats.free_spins[j]] = ( ( k >> j ) & 1u ) ? 1 : -1;
    stats.ground_states.emplace_back( std::move( full ) );
  }
  return stats;
}

/// Clamp by spin name, values +-1.
inline LandscapeStats enumerate_landscape( const Hamiltonian& h, const std::map<std::string, std::int8_t>& clamps,
                                           const LandscapeOptions& opt = {} )
{
  SpinClamps byIndex;
  for ( const auto& [name, v] : clamps )
    byIndex.emplace( h.index_of( name ), v );
  return enumerate_landscape( h, byIndex, opt );
}

} // namespace invlogic
