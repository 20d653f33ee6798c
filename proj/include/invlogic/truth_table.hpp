#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace invlogic
{

/*! \brief Total Boolean function with p inputs and q outputs.
 *
 * Input vectors and output vectors are packed little-endian by position:
 * the first written bit of `11 -> 1` is bit 0. In the spin universe the
 * inputs come first (spins 0..p-1), then outputs (p..p+q-1), then ancillas.
 */
class TruthTable
{
public:
  TruthTable( int p, int q, std::vector<std::uint32_t> outputs, std::vector<std::string> names = {} )
      : p_( p ), q_( q ), outputs_( std::move( outputs ) ), names_( std::move( names ) )
  {
    if ( p < 0 || q < 1 || p + q > 24 )
      throw std::invalid_argument( "truth table needs p >= 0, q >= 1, p + q <= 24" );
    if ( outputs_.size() != ( std::size_t{ 1 } << p ) )
      throw std::invalid_argument( "truth table must have exactly 2^p rows" );
    for ( auto y : outputs_ )
      if ( y >> q )
        throw std::invalid_argument( "output vector wider than q bits" );
    if ( names_.empty() )
      names_ = default_names( p, q );
    if ( names_.size() != static_cast<std::size_t>( p + q ) )
      throw std::invalid_argument( "need one name per input and output" );
  }

  int inputs() const noexcept { return p_; }
  int outputs() const noexcept { return q_; }
  int width() const noexcept { return p_ + q_; }
  std::uint32_t output( std::uint32_t x ) const { return outputs_.at( x ); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  /// Whether a packed (x | y << p) assignment is a row of the function.
  bool is_valid( std::uint32_t xy ) const
  {
    const std::uint32_t x = xy & ( ( 1u << p_ ) - 1u );
    const std::uint32_t y = xy >> p_;
    return outputs_[x] == y;
  }

  std::uint32_t evaluate( std::uint32_t x ) const { return outputs_.at( x ); }

  static std::vector<std::string> default_names( int p, int q )
  {
    std::vector<std::string> n;
    for ( int i = 0; i < p; ++i )
      n.push_back( p <= 8 ? std::string( 1, static_cast<char>( 'A' + i ) ) : "X" + std::to_string( i ) );
    for ( int i = 0; i < q; ++i )
      n.push_back( q == 1 ? std::string{ "Y" } : "Y" + std::to_string( i ) );
    return n;
  }

  /// Function from a predicate over the packed input.
  template<typename Fn>
  static TruthTable from_function( int p, int q, Fn&& f, std::vector<std::string> names = {} )
  {
    std::vector<std::uint32_t> out( std::size_t{ 1 } << p );
    for ( std::uint32_t x = 0; x < out.size(); ++x )
      out[x] = static_cast<std::uint32_t>( f( x ) );
    return TruthTable{ p, q, std::move( out ), std::move( names ) };
  }

private:
  int p_;
  int q_;
  std::vector<std::uint32_t> outputs_;
  std::vector<std::string> names_;
};

namespace gates
{
inline TruthTable and2() { return TruthTable::from_function( 2, 1, []( auto x ) { return ( x & 1 ) & ( x >> 1 ); } ); }
inline TruthTable or2() { return TruthTable::from_function( 2, 1, []( auto x ) { return ( x & 1 ) | ( x >> 1 ); } ); }
inline TruthTable xor2() { return TruthTable::from_function( 2, 1, []( auto x ) { return ( x & 1 ) ^ ( x >> 1 ); } ); }
inline TruthTable xnor2() { return TruthTable::from_function( 2, 1, []( auto x ) { return 1 ^ ( x & 1 ) ^ ( x >> 1 ); } ); }
inline TruthTable not1() { return TruthTable::from_function( 1, 1, []( auto x ) { return 1 ^ x; } ); }
inline TruthTable buf1() { return TruthTable::from_function( 1, 1, []( auto x ) { return x; } ); }
} // namespace gates

/*! \brief Parses the row-per-line text format.
 *
 *   # comment
 *   names: A B Y        (optional)
 *   00 -> 0
 *   01 -> 0
 *   10 -> 0
 *   11 -> 1
 */
inline TruthTable parse_truth_table( const std::string& text )
{
  std::istringstream in{ text };
  std::string line;
  int p = -1, q = -1;
  std::vector<std::string> names;
  std::vector<std::int64_t> rows;
  int lineno = 0;
  auto fail = [&]( const std::string& why ) {
    throw std::invalid_argument( "truth table line " + std::to_string( lineno ) + ": " + why );
  };
  auto parse_bits = [&]( std::string s ) {
    std::uint32_t v = 0;
    std::size_t n = 0;
    for ( char ch : s )
    {
      if ( ch == ' ' || ch == '\t' || ch == '_' )
        continue;
      if ( ch != '0' && ch != '1' )
        fail( "expected binary digits" );
      if ( ch == '1' )
        v |= 1u << n;
      ++n;
    }
    return std::pair{ v, static_cast<int>( n ) };
  };

  while ( std::getline( in, line ) )
  {
    ++lineno;
    if ( auto hash = line.find( '#' ); hash != std::string::npos )
      line.erase( hash );
    if ( line.find_first_not_of( " \t\r" ) == std::string::npos )
      continue;
    if ( auto colon = line.find( "names:" ); colon != std::string::npos )
    {
      std::istringstream ns{ line.substr( colon + 6 ) };
      std::string n;
      while ( ns >> n )
        names.push_back( n );
      continue;
    }
    const auto arrow = line.find( "->" );
    if ( arrow == std::string::npos )
      fail( "expected 'inputs -> outputs'" );
    auto [x, px] = parse_bits( line.substr( 0, arrow ) );
    auto [y, qy] = parse_bits( line.substr( arrow + 2 ) );
    if ( qy == 0 )
      fail( "empty output vector" );
    if ( p < 0 )
    {
      p = px;
      q = qy;
      if ( p > 20 )
        fail( "too many inputs" );
      rows.assign( std::size_t{ 1 } << p, -1 );
    }
    if ( px != p || qy != q )
      fail( "inconsistent row width" );
    if ( rows[x] >= 0 )
      fail( "duplicate input row" );
    rows[x] = y;
  }
  if ( p < 0 )
    throw std::invalid_argument( "truth table has no rows" );
  std::vector<std::uint32_t> out;
  for ( auto r : rows )
  {
    if ( r < 0 )
      throw std::invalid_argument( "truth table is not total: missing rows" );
    out.push_back( static_cast<std::uint32_t>( r ) );
  }
  return TruthTable{ p, q, std::move( out ), std::move( names ) };
}

inline TruthTable load_truth_table( const std::string& path )
{
  std::ifstream in{ path };
  if ( !in )
    throw std::runtime_error( "cannot open '" + path + "'" );
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_truth_table( ss.str() );
}

inline std::string format_truth_table( const TruthTable& tt )
{
  std::ostringstream os;
  os << "names:";
  for ( const auto& n : tt.names() )
    os << ' ' << n;
  os << '\n';
  for ( std::uint32_t x = 0; x < ( 1u << tt.inputs() ); ++x )
  {
    for ( int i = 0; i < tt.inputs(); ++i )
      os << ( ( x >> i ) & 1u );
    os << " -> ";
    for ( int i = 0; i < tt.outputs(); ++i )
      os << ( ( tt.output( x ) >> i ) & 1u );
    os << '\n';
  }
  return os.str();
}

} // namespace invlogic
