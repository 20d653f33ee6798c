#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace invlogic
{

/// Exact arbitrary-precision rational used for every coefficient and energy.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

/// Parses "3", "-3/2", "+7/4" and plain decimals such as "0.25".
inline Rational parse_rational( std::string_view text )
{
  std::string s{ text };
  while ( !s.empty() && std::isspace( static_cast<unsigned char>( s.front() ) ) )
    s.erase( s.begin() );
  while ( !s.empty() && std::isspace( static_cast<unsigned char>( s.back() ) ) )
    s.pop_back();
  if ( s.empty() )
    throw std::invalid_argument( "empty rational literal" );
  if ( s.front() == '+' )
    s.erase( s.begin() );

  const auto dot = s.find( '.' );
  try
  {
    if ( dot != std::string::npos )
    {
      if ( s.find( '/' ) != std::string::npos )
        throw std::invalid_argument( "mixed decimal and fraction" );
      const bool negative = !s.empty() && s.front() == '-';
      std::string digits = s.substr( negative ? 1 : 0 );
      const auto d = digits.find( '.' );
      const auto frac_len = digits.size() - d - 1;
      digits.erase( d, 1 );
      if ( digits.empty() || digits.find_first_not_of( "0123456789" ) != std::string::npos )
        throw std::invalid_argument( "bad decimal" );
      // leading zeros would make the string parse as octal
      const auto nz = digits.find_first_not_of( '0' );
      BigInt num{ nz == std::string::npos ? std::string{ "0" } : digits.substr( nz ) };
      BigInt den{ 1 };
      for ( std::size_t i = 0; i < frac_len; ++i )
        den *= 10;
      Rational r{ num, den };
      return negative ? Rational{ -r } : r;
    }
    // boost reads "010" as octal and "0x" as hex; accept plain decimal digits only
    auto integer = [&]( std::string part ) {
      const bool neg = !part.empty() && part.front() == '-';
      if ( neg )
        part.erase( part.begin() );
      if ( part.empty() || part.find_first_not_of( "0123456789" ) != std::string::npos )
        throw std::invalid_argument( "bad integer" );
      const auto nz = part.find_first_not_of( '0' );
      BigInt v{ nz == std::string::npos ? std::string{ "0" } : part.substr( nz ) };
      return neg ? BigInt{ -v } : v;
    };
    const auto slash = s.find( '/' );
    if ( slash == std::string::npos )
      return Rational{ integer( s ) };
    const BigInt den = integer( s.substr( slash + 1 ) );
    if ( den <= 0 )
      throw std::invalid_argument( "bad denominator" );
    return Rational{ integer( s.substr( 0, slash ) ), den };
  }
  catch ( const std::exception& )
  {
    throw std::invalid_argument( "cannot parse rational '" + std::string{ text } + "'" );
  }
}

/// Canonical "p/q" (or "p" when integral) form.
inline std::string to_string( const Rational& r )
{
  return r.str();
}

inline BigInt num_of( const Rational& r )
{
  return BigInt{ boost::multiprecision::numerator( r ) };
}

inline BigInt den_of( const Rational& r )
{
  return BigInt{ boost::multiprecision::denominator( r ) };
}

inline bool is_integer( const Rational& r )
{
  return den_of( r ) == 1;
}

inline std::int64_t to_int64( const BigInt& v )
{
  if ( v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min() )
    throw std::overflow_error( "integer does not fit in 64 bits: " + v.str() );
  return v.convert_to<std::int64_t>();
}

/// Integer value of an integral rational; throws if not integral or out of range.
inline std::int64_t to_int64( const Rational& r )
{
  if ( !is_integer( r ) )
    throw std::domain_error( "rational is not an integer: " + r.str() );
  return to_int64( num_of( r ) );
}

inline BigInt lcm( const BigInt& a, const BigInt& b )
{
  return boost::multiprecision::lcm( a, b );
}

/// Least common denominator of a set of rationals (1 for an empty set).
inline BigInt common_denominator( std::span<const Rational> values )
{
  BigInt d{ 1 };
  for ( const auto& v : values )
    d = lcm( d, den_of( v ) );
  return d;
}

/// Rounds num/den to the nearest integer, halves away from zero. den > 0.
constexpr std::int64_t round_half_away( std::int64_t num, std::int64_t den )
{
  if ( num >= 0 )
    return ( 2 * num + den ) / ( 2 * den );
  return -( ( -2 * num + den ) / ( 2 * den ) );
}

} // namespace invlogic
