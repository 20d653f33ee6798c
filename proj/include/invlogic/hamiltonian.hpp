#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace invlogic
{

using SpinIndex = std::uint32_t;

/*! \brief Product of distinct spins.
 *
 * Variables are kept strictly increasing. The empty monomial is the constant
 * term; since m_i^2 = 1 a repeated spin carries no meaning and is rejected.
 */
class Monomial
{
public:
  Monomial() = default;

  explicit Monomial( std::vector<SpinIndex> vars ) : vars_( std::move( vars ) )
  {
    std::sort( vars_.begin(), vars_.end() );
    if ( std::adjacent_find( vars_.begin(), vars_.end() ) != vars_.end() )
      throw std::invalid_argument( "monomial repeats a spin" );
  }

  Monomial( std::initializer_list<SpinIndex> vars ) : Monomial( std::vector<SpinIndex>( vars ) ) {}

  const std::vector<SpinIndex>& vars() const noexcept { return vars_; }
  std::size_t order() const noexcept { return vars_.size(); }
  bool empty() const noexcept { return vars_.empty(); }
  bool contains( SpinIndex i ) const { return std::binary_search( vars_.begin(), vars_.end(), i ); }

  bool operator==( const Monomial& ) const = default;

private:
  std::vector<SpinIndex> vars_;
};

/// Orders monomials by degree, then lexicographically by spin index.
struct MonomialOrder
{
  bool operator()( const Monomial& a, const Monomial& b ) const
  {
    if ( a.order() != b.order() )
      return a.order() < b.order();
    return a.vars() < b.vars();
  }
};

/// Assignment of -1/+1 to every spin. Bit encoding s = (1 + m) / 2.
class SpinState
{
public:
  SpinState() = default;
  explicit SpinState( std::vector<std::int8_t> values ) : values_( std::move( values ) )
  {
    for ( auto v : values_ )
      if ( v != 1 && v != -1 )
        throw std::invalid_argument( "spin values must be -1 or +1" );
  }

  /// Spin i is +1 iff bit i of `bits` is set.
  static SpinState from_bits( std::uint64_t bits, std::size_t n )
  {
    std::vector<std::int8_t> v( n );
    for ( std::size_t i = 0; i < n; ++i )
      v[i] = ( ( bits >> i ) & 1u ) ? 1 : -1;
    return SpinState{ std::move( v ) };
  }

  std::uint64_t to_bits() const
  {
    std::uint64_t bits = 0;
    for ( std::size_t i = 0; i < values_.size() && i < 64; ++i )
      if ( values_[i] > 0 )
        bits |= std::uint64_t{ 1 } << i;
    return bits;
  }

  std::size_t size() const noexcept { return values_.size(); }
  std::int8_t operator[]( std::size_t i ) const { return values_[i]; }
  void set( std::size_t i, std::int8_t v )
  {
    if ( v != 1 && v != -1 )
      throw std::invalid_argument( "spin values must be -1 or +1" );
    values_[i] = v;
  }
  void flip( std::size_t i ) { values_[i] = static_cast<std::int8_t>( -values_[i] ); }
  const std::vector<std::int8_t>& values() const noexcept { return values_; }

  /// "0"/"1" string in spin order.
  std::string bit_string() const
  {
    std::string s;
    for ( auto v : values_ )
      s.push_back( v > 0 ? '1' : '0' );
    return s;
  }

  bool operator==( const SpinState& ) const = default;
  bool operator<( const SpinState& o ) const { return values_ < o.values_; }

private:
  std::vector<std::int8_t> values_;
};

inline std::int8_t spin_of_bit( int bit )
{
  if ( bit != 0 && bit != 1 )
    throw std::invalid_argument( "bit value must be 0 or 1" );
  return bit ? 1 : -1;
}

/*! \brief Sparse multilinear polynomial over named +-1 spins.
 *
 * Energy convention: E(m) = offset - sum_{alpha != {}} c_alpha prod_{i in alpha} m_i.
 * Order-1 coefficients are biases, order-2 are pairwise couplings, order-3 are
 * three-body couplings. Zero coefficients are never stored.
 */
class Hamiltonian
{
public:
  using TermMap = std::map<Monomial, Rational, MonomialOrder>;

  Hamiltonian() = default;

  explicit Hamiltonian( std::vector<std::string> spin_names ) : names_( std::move( spin_names ) )
  {
    for ( std::size_t i = 0; i < names_.size(); ++i )
    {
      if ( names_[i].empty() )
        throw std::invalid_argument( "spin name must not be empty" );
      if ( !index_.emplace( names_[i], static_cast<SpinIndex>( i ) ).second )
        throw std::invalid_argument( "duplicate spin name '" + names_[i] + "'" );
    }
  }

  /// Spins named s0, s1, ...
  static Hamiltonian anonymous( std::size_t n )
  {
    std::vector<std::string> names;
    names.reserve( n );
    for ( std::size_t i = 0; i < n; ++i )
      names.push_back( "s" + std::to_string( i ) );
    return Hamiltonian{ std::move( names ) };
  }

  std::size_t num_spins() const noexcept { return names_.size(); }
  const std::vector<std::string>& spin_names() const noexcept { return names_; }
  const std::string& spin_name( SpinIndex i ) const { return names_.at( i ); }

  std::optional<SpinIndex> find_spin( std::string_view name ) const
  {
    if ( auto it = index_.find( std::string{ name } ); it != index_.end() )
      return it->second;
    return std::nullopt;
  }

  SpinIndex index_of( std::string_view name ) const
  {
    if ( auto i = find_spin( name ) )
      return *i;
    throw std::out_of_range( "unknown spin '" + std::string{ name } + "'" );
  }

  const Rational& offset() const noexcept { return offset_; }
  void set_offset( Rational offset ) { offset_ = std::move( offset ); }

  /// Adds `c` to the coefficient of `m`; an empty monomial adds -c to the offset.
  void add_term( const Monomial& m, const Rational& c )
  {
    for ( auto v : m.vars() )
      if ( v >= num_spins() )
        throw std::out_of_range( "monomial references spin " + std::to_string( v ) + " outside universe" );
    if ( m.empty() )
    {
      offset_ -= c;
      return;
    }
    auto [it, inserted] = terms_.try_emplace( m, c );
    if ( !inserted )
      it->second += c;
    if ( it->second == 0 )
      terms_.erase( it );
  }

  void add_term( std::initializer_list<std::string_view> spins, const Rational& c )
  {
    std::vector<SpinIndex> vars;
    for ( auto s : spins )
      vars.push_back( index_of( s ) );
    add_term( Monomial{ std::move( vars ) }, c );
  }

  Rational coefficient( const Monomial& m ) const
  {
    if ( m.empty() )
      return -offset_;
    auto it = terms_.find( m );
    return it == terms_.end() ? Rational{ 0 } : it->second;
  }

  Rational coefficient( std::initializer_list<std::string_view> spins ) const
  {
    std::vector<SpinIndex> vars;
    for ( auto s : spins )
      vars.push_back( index_of( s ) );
    return coefficient( Monomial{ std::move( vars ) } );
  }

  const TermMap& terms() const noexcept { return terms_; }

  std::size_t max_order() const
  {
    std::size_t k = 0;
    for ( const auto& [m, c] : terms_ )
      k = std::max( k, m.order() );
    return k;
  }

  /// Multiplies every coefficient and the offset by lambda.
  Hamiltonian scaled( const Rational& lambda ) const
  {
    Hamiltonian h{ names_ };
    if ( lambda == 0 )
      return h;
    h.offset_ = offset_ * lambda;
    for ( const auto& [m, c] : terms_ )
      h.terms_.emplace( m, c * lambda );
    return h;
  }

  /// Hamiltonian of the same function with the listed spins negated (m_i -> -m_i).
  Hamiltonian negated( std::span<const SpinIndex> spins ) const
  {
    Hamiltonian h{ names_ };
    h.offset_ = offset_;
    for ( const auto& [m, c] : terms_ )
    {
      std::size_t hits = 0;
      for ( auto s : spins )
        hits += m.contains( s ) ? 1 : 0;
      h.terms_.emplace( m, hits % 2 ? Rational{ -c } : c );
    }
    return h;
  }

  bool operator==( const Hamiltonian& o ) const
  {
    return names_ == o.names_ && offset_ == o.offset_ && terms_ == o.terms_;
  }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, SpinIndex> index_;
  TermMap terms_;
  Rational offset_{ 0 };
};

namespace detail
{
inline void require_dimension( const Hamiltonian& h, const SpinState& s )
{
  if ( s.size() != h.num_spins() )
    throw std::invalid_argument( "state has " + std::to_string( s.size() ) + " spins, Hamiltonian has " +
                                 std::to_string( h.num_spins() ) );
}

inline int monomial_sign( const Monomial& m, const SpinState& s, std::optional<SpinIndex> skip = std::nullopt )
{
  int p = 1;
  for ( auto v : m.vars() )
    if ( v != skip )
      p *= s[v];
  return p;
}
} // namespace detail

/// E(s) = offset - sum c_alpha prod m_i, evaluated exactly.
inline Rational energy( const Hamiltonian& h, const SpinState& s )
{
  detail::require_dimension( h, s );
  Rational e = h.offset();
  for ( const auto& [m, c] : h.terms() )
  {
    if ( detail::monomial_sign( m, s ) > 0 )
      e -= c;
    else
      e += c;
  }
  return e;
}

/*! \brief Deterministic local field on spin i.
 *
 * Sum over every term containing i of c_alpha times the product of the other
 * spins in alpha, i.e. -dE/dm_i for the multilinear energy. Flipping spin i
 * changes the energy by exactly 2 m_i I_i.
 */
inline Rational local_field( const Hamiltonian& h, const SpinState& s, SpinIndex i )
{
  detail::require_dimension( h, s );
  if ( i >= h.num_spins() )
    throw std::out_of_range( "spin index " + std::to_string( i ) + " out of range" );
  Rational f{ 0 };
  for ( const auto& [m, c] : h.terms() )
  {
    if ( !m.contains( i ) )
      continue;
    if ( detail::monomial_sign( m, s, i ) > 0 )
      f += c;
    else
      f -= c;
  }
  return f;
}

/// One summand of a composition: a Hamiltonian and the shared-universe name of each of its spins.
struct ComposePart
{
  const Hamiltonian* hamiltonian;
  std::vector<std::string> targets;
};

/*! \brief Sums Hamiltonians over a shared spin universe.
 *
 * The universe starts with `universe` (in order) and grows by first appearance
 * of any unseen target name. Coefficients of identical monomials add, offsets add.
 * Two spins of one part mapped onto the same target is an error.
 */
inline Hamiltonian compose( std::span<const ComposePart> parts, std::vector<std::string> universe = {} )
{
  std::unordered_map<std::string, SpinIndex> pos;
  for ( std::size_t i = 0; i < universe.size(); ++i )
    if ( !pos.emplace( universe[i], static_cast<SpinIndex>( i ) ).second )
      throw std::invalid_argument( "duplicate universe name '" + universe[i] + "'" );

  std::vector<std::vector<SpinIndex>> maps;
  for ( const auto& part : parts )
  {
    if ( part.hamiltonian == nullptr )
      throw std::invalid_argument( "null Hamiltonian in composition" );
    if ( part.targets.size() != part.hamiltonian->num_spins() )
      throw std::invalid_argument( "renaming covers " + std::to_string( part.targets.size() ) + " of " +
                                   std::to_string( part.hamiltonian->num_spins() ) + " spins" );
    std::vector<SpinIndex> map;
    for ( const auto& t : part.targets )
    {
      auto [it, inserted] = pos.emplace( t, static_cast<SpinIndex>( universe.size() ) );
      if ( inserted )
        universe.push_back( t );
      if ( std::find( map.begin(), map.end(), it->second ) != map.end() )
        throw std::invalid_argument( "renaming maps two spins of one part onto '" + t + "'" );
      map.push_back( it->second );
    }
    maps.push_back( std::move( map ) );
  }

  Hamiltonian out{ std::move( universe ) };
  Rational offset{ 0 };
  for ( std::size_t p = 0; p < parts.size(); ++p )
  {
    const auto& h = *parts[p].hamiltonian;
    offset += h.offset();
    for ( const auto& [m, c] : h.terms() )
    {
      std::vector<SpinIndex> vars;
      vars.reserve( m.order() );
      for ( auto v : m.vars() )
        vars.push_back( maps[p][v] );
      out.add_term( Monomial{ std::move( vars ) }, c );
    }
  }
  out.set_offset( offset );
  return out;
}

/// Fixed spin values, keyed by index into the Hamiltonian being clamped.
using SpinClamps = std::map<SpinIndex, std::int8_t>;

/*! \brief Substitutes fixed spin values.
 *
 * The result lives on the free spins only (names and relative order kept).
 * Terms lose their fixed factors; fully fixed terms fold into the offset, so
 * E_clamped(s) = E_full(s joined with fixed) for every free assignment s.
 */
inline Hamiltonian clamp( const Hamiltonian& h, const SpinClamps& fixed )
{
  for ( const auto& [i, v] : fixed )
  {
    if ( i >= h.num_spins() )
      throw std::out_of_range( "clamped spin index " + std::to_string( i ) + " out of range" );
    if ( v != 1 && v != -1 )
      throw std::invalid_argument( "clamp value must be -1 or +1" );
  }

  std::vector<std::int64_t> remap( h.num_spins(), -1 );
  std::vector<std::string> names;
  for ( SpinIndex i = 0; i < h.num_spins(); ++i )
    if ( !fixed.contains( i ) )
    {
      remap[i] = static_cast<std::int64_t>( names.size() );
      names.push_back( h.spin_name( i ) );
    }

  Hamiltonian out{ std::move( names ) };
  Rational offset = h.offset();
  for ( const auto& [m, c] : h.terms() )
  {
    int sign = 1;
    std::vector<SpinIndex> vars;
    for ( auto v : m.vars() )
    {
      if ( auto it = fixed.find( v ); it != fixed.end() )
        sign *= it->second;
      else
        vars.push_back( static_cast<SpinIndex>( remap[v] ) );
    }
    const Rational coeff = sign > 0 ? c : Rational{ -c };
    if ( vars.empty() )
      offset -= coeff;
    else
      out.add_term( Monomial{ std::move( vars ) }, coeff );
  }
  out.set_offset( offset );
  return out;
}

/// Clamp by spin name.
inline Hamiltonian clamp( const Hamiltonian& h, const std::map<std::string, std::int8_t>& fixed )
{
  SpinClamps byIndex;
  for ( const auto& [name, v] : fixed )
    byIndex.emplace( h.index_of( name ), v );
  return clamp( h, byIndex );
}

/*! \brief Hamiltonian with coefficients scaled to integers.
 *
 * All stored values equal `scale` times the rational ones, where scale is the
 * least common denominator of every coefficient and the offset.
 */
struct IntegerHamiltonian
{
  struct Term
  {
    std::vector<SpinIndex> vars;
    std::int64_t coeff;
  };

  std::size_t num_spins = 0;
  std::int64_t scale = 1;
  std::int64_t offset = 0;
  std::vector<Term> terms;

  /// Scaled energy: scale * E(s).
  std::int64_t energy( std::span<const std::int8_t> s ) const
  {
    std::int64_t e = offset;
    for ( const auto& t : terms )
    {
      int p = 1;
      for ( auto v : t.vars )
        p *= s[v];
      e -= p * t.coeff;
    }
    return e;
  }
};

inline IntegerHamiltonian to_integer( const Hamiltonian& h )
{
  std::vector<Rational> values{ h.offset() };
  for ( const auto& [m, c] : h.terms() )
    values.push_back( c );
  const BigInt scale = common_denominator( values );

  IntegerHamiltonian out;
  out.num_spins = h.num_spins();
  out.scale = to_int64( scale );
  const Rational r_scale{ scale };
  out.offset = to_int64( Rational{ h.offset() * r_scale } );
  for ( const auto& [m, c] : h.terms() )
    out.terms.push_back( { m.vars(), to_int64( Rational{ c * r_scale } ) } );
  return out;
}

} // namespace invlogic
