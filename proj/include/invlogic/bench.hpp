#pragma once

#include "config.hpp"
#include "engine.hpp"
#include "gate_library.hpp"
#include "netlist.hpp"
#include "random.hpp"

#include <boost/uuid/detail/sha1.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace invlogic
{

enum class YSet
{
  AllAchievable,
  Sample
};

/*! \brief Backward-mode convergence sweep over adder outputs.
 *
 * Each y gets trials_per_y trials; trial t for output y uses seed
 * cfg.seed ^ ((y << 32) | t). shots_max overrides cfg.n_shot_max.
 */
struct BenchSpec
{
  int adder_bits = 4;
  BodyOrder body = BodyOrder::Three;
  int trials_per_y = 100;
  YSet y_set = YSet::AllAchievable;
  int sample_k = 32;
  std::uint64_t sample_seed = 1;
  bool include_unachievable = false;
  int shots_max = 32;
  AnnealConfig cfg;

  void validate() const
  {
    if ( adder_bits < 1 || adder_bits > 30 )
      throw std::invalid_argument( "adder_bits must lie in [1, 30]" );
    if ( trials_per_y < 1 )
      throw std::invalid_argument( "trials_per_y must be >= 1" );
    if ( shots_max < 1 )
      throw std::invalid_argument( "shots_max must be >= 1" );
    if ( y_set == YSet::Sample && sample_k < 1 )
      throw std::invalid_argument( "sample size must be >= 1" );
    cfg.validate();
  }

  /// 8-bit and wider adders default to a 32-value sample.
  static BenchSpec defaults_for( int bits )
  {
    BenchSpec s;
    s.adder_bits = bits;
    if ( bits >= 8 )
    {
      s.y_set = YSet::Sample;
      s.sample_k = 32;
    }
    return s;
  }
};

inline std::string to_string( YSet y ) { return y == YSet::AllAchievable ? "all" : "sample"; }

inline std::vector<std::pair<std::string, std::string>> bench_entries( const BenchSpec& s )
{
  std::vector<std::pair<std::string, std::string>> e{
      { "adder_bits", std::to_string( s.adder_bits ) },
      { "body", std::to_string( static_cast<int>( s.body ) ) },
      { "trials_per_y", std::to_string( s.trials_per_y ) },
      { "y_set", to_string( s.y_set ) },
      { "sample_k", std::to_string( s.sample_k ) },
      { "sample_seed", std::to_string( s.sample_seed ) },
      { "include_unachievable", s.include_unachievable ? "1" : "0" },
      { "shots_max", std::to_string( s.shots_max ) } };
  for ( auto& kv : config_entries( s.cfg ) )
    if ( kv.first != "n_shot_max" )
      e.push_back( std::move( kv ) );
  return e;
}

/// Inverse of bench_entries; unknown keys are an error.
inline BenchSpec bench_spec_from( const ConfigMap& m )
{
  ConfigMap rest = m;
  BenchSpec s;
  apply_anneal_config( s.cfg, rest );
  auto take = [&]( const char* key ) -> std::optional<std::string> {
    auto it = rest.find( key );
    if ( it == rest.end() )
      return std::nullopt;
    std::string v = it->second;
    rest.erase( it );
    return v;
  };
  if ( auto v = take( "adder_bits" ) )
    s.adder_bits = static_cast<int>( detail::to_ll( "adder_bits", *v ) );
  if ( auto v = take( "body" ) )
  {
    const auto b = detail::to_ll( "body", *v );
    if ( b != 2 && b != 3 )
      throw std::invalid_argument( "body must be 2 or 3" );
    s.body = static_cast<BodyOrder>( b );
  }
  if ( auto v = take( "trials_per_y" ) )
    s.trials_per_y = static_cast<int>( detail::to_ll( "trials_per_y", *v ) );
  if ( auto v = take( "y_set" ) )
  {
    if ( *v == "all" )
      s.y_set = YSet::AllAchievable;
    else if ( *v == "sample" )
      s.y_set = YSet::Sample;
    else
      throw std::invalid_argument( "y_set must be 'all' or 'sample'" );
  }
  if ( auto v = take( "sample_k" ) )
    s.sample_k = static_cast<int>( detail::to_ll( "sample_k", *v ) );
  if ( auto v = take( "sample_seed" ) )
    s.sample_seed = std::stoull( *v );
  if ( auto v = take( "include_unachievable" ) )
    s.include_unachievable = *v == "1" || *v == "true";
  if ( auto v = take( "shots_max" ) )
    s.shots_max = static_cast<int>( detail::to_ll( "shots_max", *v ) );
  if ( !rest.empty() )
    throw std::invalid_argument( "unknown config key '" + rest.begin()->first + "'" );
  s.cfg.n_shot_max = s.shots_max;
  s.validate();
  return s;
}

/// The y values swept by a spec, ascending.
inline std::vector<std::uint64_t> bench_y_values( const BenchSpec& s )
{
  const std::uint64_t top = ( std::uint64_t{ 1 } << ( s.adder_bits + 1 ) ) - 1;
  const std::uint64_t last = s.include_unachievable ? top : top - 1;
  std::vector<std::uint64_t> all;
  if ( s.y_set == YSet::AllAchievable || static_cast<std::uint64_t>( s.sample_k ) > last )
  {
    for ( std::uint64_t y = 0; y <= last; ++y )
      all.push_back( y );
    return all;
  }
  // partial Fisher-Yates over the implicit range [0, last]
  MainRng rng( s.sample_seed );
  std::map<std::uint64_t, std::uint64_t> swapped;
  auto at = [&]( std::uint64_t i ) {
    auto it = swapped.find( i );
    return it == swapped.end() ? i : it->second;
  };
  const std::uint64_t size = last + 1;
  for ( int k = 0; k < s.sample_k; ++k )
  {
    const std::uint64_t i = static_cast<std::uint64_t>( k );
    const std::uint64_t j = i + uniform_below( rng, size - i );
    const std::uint64_t vi = at( i ), vj = at( j );
    swapped[i] = vj;
    swapped[j] = vi;
    all.push_back( vj );
  }
  std::sort( all.begin(), all.end() );
  return all;
}

constexpr std::uint64_t bench_trial_seed( std::uint64_t base, std::uint64_t y, std::uint64_t t )
{
  return base ^ ( ( y << 32 ) | t );
}

/// Upper estimate of single-spin updates for the whole sweep.
inline double estimated_spin_updates( const BenchSpec& s )
{
  const double spins = 7.0 * s.adder_bits + 1.0;
  return static_cast<double>( bench_y_values( s ).size() ) * s.trials_per_y * s.shots_max *
         2.0 * s.cfg.steps_per_half() * spins;
}

inline constexpr double desk_scale_limit = 1e10;

struct YCurve
{
  std::uint64_t y = 0;
  /// cumulative[s - 1] = fraction converged by shot s.
  std::vector<double> cumulative;
  int converged = 0;
  int invalid = 0;
};

struct ConvergenceReport
{
  BenchSpec spec;
  std::vector<YCurve> curves;
  /// mean_convergence[s - 1] over the swept y values.
  std::vector<double> mean_convergence;
  int invalid_converged = 0;
  std::string hash;

  double mean_non_convergence( int shot ) const { return 1.0 - mean_convergence.at( shot - 1 ); }

  /// First shot whose mean non-convergence is below `level`, or 0.
  int first_shot_below( double level ) const
  {
    for ( std::size_t s = 0; s < mean_convergence.size(); ++s )
      if ( 1.0 - mean_convergence[s] < level )
        return static_cast<int>( s + 1 );
    return 0;
  }
};

/// Git-style blob hash (SHA-1 of "blob <size>\0" + text).
inline std::string content_hash( const std::string& text )
{
  boost::uuids::detail::sha1 h;
  const std::string head = "blob " + std::to_string( text.size() );
  h.process_bytes( head.data(), head.size() + 1 );
  h.process_bytes( text.data(), text.size() );
  boost::uuids::detail::sha1::digest_type d;
  h.get_digest( d );
  std::ostringstream os;
  for ( auto w : d )
    os << std::hex << std::setw( 8 ) << std::setfill( '0' ) << w;
  return os.str();
}

inline std::string format_bench_config( const BenchSpec& s )
{
  std::string out;
  for ( const auto& [k, v] : bench_entries( s ) )
    out += k + "=" + v + "\n";
  return out;
}

/*! \brief Runs the sweep.
 *
 * Converged trials are re-checked arithmetically (A + B = y on the final
 * state); failures are counted in invalid_converged.
 */
inline ConvergenceReport run_bench( const BenchSpec& spec, bool confirm_large = false, unsigned threads = 0 )
{
  spec.validate();
  if ( !confirm_large && estimated_spin_updates( spec ) > desk_scale_limit )
    throw std::invalid_argument( "benchmark exceeds 1e10 estimated spin updates; confirmation required" );

  ConvergenceReport rep;
  rep.spec = spec;
  rep.spec.cfg.n_shot_max = spec.shots_max;
  rep.hash = content_hash( format_bench_config( rep.spec ) );
  const auto ys = bench_y_values( spec );
  const CircuitHamiltonian base = elaborate( ripple_adder( spec.adder_bits ), library_for( spec.body ) );
  const auto shots = static_cast<std::size_t>( spec.shots_max );
  rep.mean_convergence.assign( shots, 0.0 );

  for ( auto y : ys )
  {
    const CircuitHamiltonian ch = clamp_mode( base, ClampMode::backward( y ) );
    const CompiledCircuit cc{ ch };
    const Engine engine{ cc, rep.spec.cfg };
    std::vector<TrialResult> res( static_cast<std::size_t>( spec.trials_per_y ) );
    parallel_for( res.size(), threads,
                  [&]( std::size_t t ) { res[t] = engine.run_trial( bench_trial_seed( spec.cfg.seed, y, t ) ); } );

    YCurve curve;
    curve.y = y;
    std::vector<int> first( shots + 1, 0 );
    for ( const auto& r : res )
    {
      if ( !r.converged )
        continue;
      ++curve.converged;
      ++first[static_cast<std::size_t>( r.shots_used )];
      const auto vals = net_values( ch, r.final_state );
      const auto a = read_word( ch.netlist, vals, "A" );
      const auto b = read_word( ch.netlist, vals, "B" );
      if ( a + b != y )
        ++curve.invalid;
    }
    int cum = first[0];
    for ( std::size_t s = 1; s <= shots; ++s )
    {
      cum += first[s];
      curve.cumulative.push_back( static_cast<double>( cum ) / spec.trials_per_y );
    }
    rep.invalid_converged += curve.invalid;
    rep.curves.push_back( std::move( curve ) );
  }
  for ( std::size_t s = 0; s < shots; ++s )
  {
    double sum = 0;
    for ( const auto& c : rep.curves )
      sum += c.cumulative[s];
    rep.mean_convergence[s] = rep.curves.empty() ? 0.0 : sum / static_cast<double>( rep.curves.size() );
  }
  return rep;
}

inline std::string format_rate( double v )
{
  char buf[32];
  std::snprintf( buf, sizeof buf, "%.6f", v );
  return buf;
}

/// CSV with a `# config:` header; rows `y,shot,convergence,non_convergence`, y = "mean" for averages.
inline void write_report_csv( std::ostream& os, const ConvergenceReport& rep )
{
  for ( const auto& [k, v] : bench_entries( rep.spec ) )
    os << "# config: " << k << "=" << v << "\n";
  os << "# hash: " << rep.hash << "\n";
  os << "# invalid_converged: " << rep.invalid_converged << "\n";
  os << "y,shot,convergence,non_convergence\n";
  for ( const auto& c : rep.curves )
    for ( std::size_t s = 0; s < c.cumulative.size(); ++s )
      os << c.y << ',' << s + 1 << ',' << format_rate( c.cumulative[s] ) << ','
         << format_rate( 1.0 - c.cumulative[s] ) << '\n';
  for ( std::size_t s = 0; s < rep.mean_convergence.size(); ++s )
    os << "mean," << s + 1 << ',' << format_rate( rep.mean_convergence[s] ) << ','
       << format_rate( 1.0 - rep.mean_convergence[s] ) << '\n';
}

/// Line chart of mean convergence against shot, one polyline per report.
inline void write_svg( std::ostream& os, const std::vector<const ConvergenceReport*>& reps )
{
  const double w = 640, h = 400, ml = 50, mr = 20, mt = 20, mb = 40;
  std::size_t shots = 1;
  for ( auto* r : reps )
    shots = std::max( shots, r->mean_convergence.size() );
  auto px = [&]( double s ) { return ml + ( shots > 1 ? ( s - 1 ) / double( shots - 1 ) : 0.0 ) * ( w - ml - mr ); };
  auto py = [&]( double v ) { return mt + ( 1.0 - v ) * ( h - mt - mb ); };
  const char* colors[] = { "#1f77b4", "#d62728", "#2ca02c", "#9467bd" };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << py( 0 ) << "\" x2=\"" << w - mr << "\" y2=\"" << py( 0 )
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << py( 0 ) << "\" x2=\"" << ml << "\" y2=\"" << py( 1 )
     << "\" stroke=\"black\"/>\n";
  for ( double v : { 0.0, 0.5, 1.0 } )
    os << "<text x=\"" << ml - 8 << "\" y=\"" << py( v ) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << v
       << "</text>\n";
  os << "<text x=\"" << ( w + ml ) / 2 << "\" y=\"" << h - 8 << "\" font-size=\"12\" text-anchor=\"middle\">shot</text>\n";
  for ( std::size_t i = 0; i < reps.size(); ++i )
  {
    const auto& r = *reps[i];
    os << "<polyline fill=\"none\" stroke=\"" << colors[i % 4] << "\" stroke-width=\"2\" points=\"";
    for ( std::size_t s = 0; s < r.mean_convergence.size(); ++s )
      os << px( double( s + 1 ) ) << ',' << py( r.mean_convergence[s] ) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << w - mr - 4 << "\" y=\"" << py( 0 ) - 10 - 14.0 * i << "\" font-size=\"12\" text-anchor=\"end\" fill=\""
       << colors[i % 4] << "\">" << to_string( r.spec.body ) << ", " << r.spec.adder_bits << "-bit</text>\n";
  }
  os << "</svg>\n";
}

} // namespace invlogic
