#pragma once

#include "engine.hpp"
#include "rational.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace invlogic
{

using ConfigMap = std::map<std::string, std::string>;

namespace detail
{
inline std::string trim( std::string s )
{
  const auto b = s.find_first_not_of( " \t\r" );
  if ( b == std::string::npos )
    return {};
  const auto e = s.find_last_not_of( " \t\r" );
  return s.substr( b, e - b + 1 );
}
} // namespace detail

/*! \brief Flat `key=value` text.
 *
 * Lines starting with `# config:` are read as entries, so a report header can
 * be fed back in. Other lines without '=' and other comments are ignored.
 */
inline ConfigMap parse_config( const std::string& text )
{
  ConfigMap out;
  std::istringstream in( text );
  std::string line;
  while ( std::getline( in, line ) )
  {
    line = detail::trim( line );
    if ( line.rfind( "# config:", 0 ) == 0 )
      line = detail::trim( line.substr( 9 ) );
    else if ( line.empty() || line.front() == '#' )
      continue;
    const auto eq = line.find( '=' );
    if ( eq == std::string::npos )
      continue;
    out[detail::trim( line.substr( 0, eq ) )] = detail::trim( line.substr( eq + 1 ) );
  }
  return out;
}

inline ConfigMap load_config( const std::string& path )
{
  std::ifstream in( path );
  if ( !in )
    throw std::runtime_error( "cannot open config file '" + path + "'" );
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config( ss.str() );
}

namespace detail
{
inline long long to_ll( const std::string& key, const std::string& v )
{
  std::size_t pos = 0;
  long long r = 0;
  try
  {
    r = std::stoll( v, &pos );
  }
  catch ( const std::exception& )
  {
    pos = 0;
  }
  if ( pos != v.size() || v.empty() )
    throw std::invalid_argument( "config key '" + key + "': expected an integer, got '" + v + "'" );
  return r;
}
} // namespace detail

/// Applies the AnnealConfig keys found in `m` and removes them; unknown keys stay.
inline void apply_anneal_config( AnnealConfig& cfg, ConfigMap& m )
{
  auto take = [&]( const char* key, auto&& fn ) {
    if ( auto it = m.find( key ); it != m.end() )
    {
      fn( it->second );
      m.erase( it );
    }
  };
  take( "i0_min", [&]( const std::string& v ) { cfg.i0_min = parse_rational( v ); } );
  take( "i0_max", [&]( const std::string& v ) { cfg.i0_max = parse_rational( v ); } );
  take( "half_period_T", [&]( const std::string& v ) { cfg.half_period_T = static_cast<int>( detail::to_ll( "half_period_T", v ) ); } );
  take( "n_shot_max", [&]( const std::string& v ) { cfg.n_shot_max = static_cast<int>( detail::to_ll( "n_shot_max", v ) ); } );
  take( "w_rnd", [&]( const std::string& v ) { cfg.w_rnd = parse_rational( v ); } );
  take( "tau", [&]( const std::string& v ) { cfg.tau = static_cast<int>( detail::to_ll( "tau", v ) ); } );
  take( "mode", [&]( const std::string& v ) { cfg.mode = parse_update_mode( v ); } );
  take( "update_order", [&]( const std::string& v ) { cfg.update_order = parse_update_order( v ); } );
  take( "counter_bound_L", [&]( const std::string& v ) { cfg.counter_bound_L = static_cast<int>( detail::to_ll( "counter_bound_L", v ) ); } );
  take( "seed", [&]( const std::string& v ) { cfg.seed = std::stoull( v ); } );
}

inline AnnealConfig anneal_config_from( const ConfigMap& m )
{
  ConfigMap rest = m;
  AnnealConfig cfg;
  apply_anneal_config( cfg, rest );
  if ( !rest.empty() )
    throw std::invalid_argument( "unknown config key '" + rest.begin()->first + "'" );
  cfg.validate();
  return cfg;
}

/// Entries in a fixed order; parse_config of the formatted text gives the same config.
inline std::vector<std::pair<std::string, std::string>> config_entries( const AnnealConfig& cfg )
{
  return { { "i0_min", to_string( cfg.i0_min ) },
           { "i0_max", to_string( cfg.i0_max ) },
           { "half_period_T", std::to_string( cfg.half_period_T ) },
           { "n_shot_max", std::to_string( cfg.n_shot_max ) },
           { "w_rnd", to_string( cfg.w_rnd ) },
           { "tau", std::to_string( cfg.tau ) },
           { "mode", to_string( cfg.mode ) },
           { "update_order", to_string( cfg.update_order ) },
           { "counter_bound_L", std::to_string( cfg.counter_bound_L ) },
           { "seed", std::to_string( cfg.seed ) } };
}

inline std::string format_config( const AnnealConfig& cfg )
{
  std::string s;
  for ( const auto& [k, v] : config_entries( cfg ) )
    s += k + "=" + v + "\n";
  return s;
}

} // namespace invlogic
