#pragma once

#include "hamiltonian.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace invlogic
{

/*! \brief Hamiltonian <-> JSON.
 *
 *   {"spins": ["A","B","Y"], "offset": "0",
 *    "terms": [{"vars": ["Y"], "c": "-1"}, {"vars": ["A","Y"], "c": "1"}]}
 *
 * Coefficients are rational strings ("-3/2"); terms are written in degree-then-
 * index order, so serialization is canonical and lossless.
 */
inline nlohmann::ordered_json to_json( const Hamiltonian& h )
{
  nlohmann::ordered_json j;
  j["spins"] = h.spin_names();
  j["offset"] = to_string( h.offset() );
  auto terms = nlohmann::ordered_json::array();
  for ( const auto& [m, c] : h.terms() )
  {
    auto vars = nlohmann::ordered_json::array();
    for ( auto v : m.vars() )
      vars.push_back( h.spin_name( v ) );
    terms.push_back( { { "vars", std::move( vars ) }, { "c", to_string( c ) } } );
  }
  j["terms"] = std::move( terms );
  return j;
}

namespace detail
{
inline Rational rational_from_json( const nlohmann::ordered_json& v )
{
  if ( v.is_string() )
    return parse_rational( v.get<std::string>() );
  if ( v.is_number_integer() )
    return Rational{ v.get<std::int64_t>() };
  throw std::invalid_argument( "coefficient must be a rational string or an integer" );
}
} // namespace detail

inline Hamiltonian hamiltonian_from_json( const nlohmann::ordered_json& j )
{
  if ( !j.is_object() || !j.contains( "spins" ) )
    throw std::invalid_argument( "Hamiltonian JSON needs a \"spins\" array" );
  Hamiltonian h{ j.at( "spins" ).get<std::vector<std::string>>() };
  Rational offset{ 0 };
  if ( j.contains( "offset" ) )
    offset = detail::rational_from_json( j.at( "offset" ) );
  if ( j.contains( "terms" ) )
    for ( const auto& t : j.at( "terms" ) )
    {
      std::vector<SpinIndex> vars;
      for ( const auto& name : t.at( "vars" ) )
        vars.push_back( h.index_of( name.get<std::string>() ) );
      const Rational c = detail::rational_from_json( t.at( "c" ) );
      if ( vars.empty() )
        offset -= c;
      else
        h.add_term( Monomial{ std::move( vars ) }, c );
    }
  h.set_offset( offset );
  return h;
}

inline Hamiltonian parse_hamiltonian_json( const std::string& text )
{
  return hamiltonian_from_json( nlohmann::ordered_json::parse( text ) );
}

inline Hamiltonian load_hamiltonian( const std::string& path )
{
  std::ifstream in{ path };
  if ( !in )
    throw std::runtime_error( "cannot open '" + path + "'" );
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_hamiltonian_json( ss.str() );
}

} // namespace invlogic
