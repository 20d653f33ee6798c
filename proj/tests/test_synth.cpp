#include "test_util.hpp"

#include <invlogic/gate_library.hpp>
#include <invlogic/hamiltonian_json.hpp>
#include <invlogic/synth.hpp>
#include <invlogic/truth_table.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

using namespace invlogic;

namespace
{
BasisSpec bounded( int order, Rational b, int ancilla = 0 )
{
  BasisSpec s;
  s.max_order = order;
  s.coeff_bound = b;
  s.num_ancilla = ancilla;
  return s;
}

TruthTable random_table( std::mt19937& rng )
{
  const int w = 2 + static_cast<int>( rng() % 3 ); // p + q in [2, 4]
  const int q = 1 + static_cast<int>( rng() % ( w - 1 ) );
  const int p = w - q;
  std::vector<std::uint32_t> out( 1u << p );
  for ( auto& y : out )
    y = rng() % ( 1u << q );
  return TruthTable{ p, q, out };
}

std::tuple<Rational, Rational, Rational, std::size_t> stats_of( const Hamiltonian& h )
{
  const auto s = enumerate_landscape( h );
  return { s.e_min, s.delta_e_min, s.delta_e_max, s.n_levels };
}
} // namespace

TEST( TruthTable, ParseAndFormat )
{
  const auto tt = parse_truth_table( "# and\nnames: A B Y\n00 -> 0\n10 -> 0\n01 -> 0\n11 -> 1\n" );
  EXPECT_EQ( tt.inputs(), 2 );
  EXPECT_EQ( tt.outputs(), 1 );
  EXPECT_EQ( tt.output( 3 ), 1u );
  EXPECT_EQ( tt.output( 1 ), 0u );
  EXPECT_EQ( parse_truth_table( format_truth_table( gates::xor2() ) ).output( 1 ), 1u );
  EXPECT_THROW( parse_truth_table( "00 -> 0\n" ), std::invalid_argument );
  EXPECT_THROW( parse_truth_table( "0 -> 1\n0 -> 0\n" ), std::invalid_argument );
}

TEST( GapLp, AndConstraintCounts )
{
  BasisSpec b;
  b.max_order = 3;
  b.coeff_bound.reset();
  const auto lp = build_lp( gates::and2(), b );
  EXPECT_EQ( lp.num_equalities, 4u );
  EXPECT_EQ( lp.num_inequalities, 4u );
  EXPECT_EQ( lp.monomials.size(), 7u );
  EXPECT_EQ( lp.program.num_variables(), 9u );
}

TEST( GapLp, ThreeBodyAndIsExact )
{
  const auto out = solve_lp( build_lp( gates::and2(), bounded( 3, 1 ) ) );
  ASSERT_TRUE( out.ok() );
  const auto& h = out.result->hamiltonian;
  EXPECT_EQ( h.coefficient( { "Y" } ), Rational{ -1 } );
  EXPECT_EQ( h.coefficient( { "A", "Y" } ), Rational{ 1 } );
  EXPECT_EQ( h.coefficient( { "B", "Y" } ), Rational{ 1 } );
  EXPECT_EQ( h.coefficient( { "A", "B", "Y" } ), Rational{ 1 } );
  EXPECT_EQ( h.terms().size(), 4u );
  EXPECT_EQ( out.result->d, Rational{ 4 } );
  EXPECT_EQ( out.result->e_min, Rational{ -2 } );
}

TEST( GapLp, UnboundedWithoutCoefficientBound )
{
  BasisSpec b;
  b.coeff_bound.reset();
  EXPECT_EQ( solve_lp( build_lp( gates::and2(), b ) ).status, SynthStatus::Unbounded );
}

TEST( GapLp, PairwiseXorIsInfeasible )
{
  EXPECT_EQ( solve_lp( build_lp( gates::xor2(), bounded( 2, 1 ) ) ).status, SynthStatus::Infeasible );
  EXPECT_EQ( solve_lp( build_lp( gates::xnor2(), bounded( 2, 5 ) ) ).status, SynthStatus::Infeasible );
}

TEST( GapLp, BufferHasPositiveCoupling )
{
  const auto out = solve_lp( build_lp( gates::buf1(), bounded( 2, 1 ) ) );
  ASSERT_TRUE( out.ok() );
  EXPECT_GT( out.result->hamiltonian.coefficient( { "A", "Y" } ), 0 );
}

TEST( GapLp, PairwiseAndMatchesLibrary )
{
  const auto out = solve_lp( build_lp( gates::and2(), bounded( 2, 2 ) ) );
  ASSERT_TRUE( out.ok() );
  EXPECT_EQ( out.result->hamiltonian, two_body_library().at( GateKind::AND ).hamiltonian );
  EXPECT_EQ( stats_of( out.result->hamiltonian ),
             std::make_tuple( Rational{ -3 }, Rational{ 4 }, Rational{ 12 }, std::size_t{ 3 } ) );
}

TEST( GapLpProperty, SoundOnRandomTables )
{
  std::mt19937 rng( 9 );
  for ( int k = 0; k < 50; ++k )
  {
    const auto tt = random_table( rng );
    const auto out = solve_lp( build_lp( tt, bounded( tt.width(), 1 ) ) );
    ASSERT_TRUE( out.ok() ) << format_truth_table( tt );
    const auto& r = *out.result;
    ASSERT_GT( r.d, 0 );
    // independent check of every state
    for ( std::uint32_t xy = 0; xy < ( 1u << tt.width() ); ++xy )
    {
      const Rational e = testutil::oracle_energy( r.hamiltonian, SpinState::from_bits( xy, tt.width() ) );
      if ( tt.is_valid( xy ) )
        ASSERT_EQ( e, r.e_min );
      else
        ASSERT_GE( e, r.e_min + r.d );
    }
    ASSERT_TRUE( verify( r, tt ).ok );
  }
}

TEST( TwoLevel, XorIsSingleThreeBodyTerm )
{
  const auto r = two_level_construct( gates::xor2(), -2, 2 );
  EXPECT_EQ( r.hamiltonian.terms().size(), 1u );
  EXPECT_EQ( r.hamiltonian.coefficient( { "A", "B", "Y" } ), Rational{ -2 } );
  EXPECT_EQ( r.hamiltonian.offset(), Rational{ 0 } );
}

TEST( TwoLevel, AndMatchesLp )
{
  const auto lp = solve_lp( build_lp( gates::and2(), bounded( 3, 1 ) ) );
  EXPECT_EQ( two_level_construct( gates::and2(), -2, 2 ).hamiltonian, lp.result->hamiltonian );
}

TEST( TwoLevelProperty, ExactlyTwoLevels )
{
  std::mt19937 rng( 10 );
  for ( int k = 0; k < 50; ++k )
  {
    const auto tt = random_table( rng );
    const Rational ev = Rational{ static_cast<int>( rng() % 7 ) - 3 } / ( 1 + rng() % 3 );
    const Rational ei = ev + Rational{ 1 + static_cast<int>( rng() % 5 ) } / ( 1 + rng() % 4 );
    const auto r = two_level_construct( tt, ev, ei );
    for ( std::uint32_t xy = 0; xy < ( 1u << tt.width() ); ++xy )
      ASSERT_EQ( testutil::oracle_energy( r.hamiltonian, SpinState::from_bits( xy, tt.width() ) ),
                 tt.is_valid( xy ) ? ev : ei );
  }
}

TEST( Synthesis, LpAndTwoLevelAgreeOnGates )
{
  const auto two_level = std::make_tuple( Rational{ -2 }, Rational{ 4 }, Rational{ 4 }, std::size_t{ 2 } );
  for ( auto k : { GateKind::AND, GateKind::OR, GateKind::XOR, GateKind::XNOR } )
  {
    const auto tt = truth_table_of( k );
    const Rational b = ( k == GateKind::AND || k == GateKind::OR ) ? 1 : 2;
    const auto lp = solve_lp( build_lp( tt, bounded( 3, b ) ) );
    ASSERT_TRUE( lp.ok() );
    EXPECT_EQ( stats_of( lp.result->hamiltonian ), two_level ) << to_string( k );
    EXPECT_EQ( stats_of( two_level_construct( tt, -2, 2 ).hamiltonian ), two_level ) << to_string( k );
  }
}

TEST( Ancilla, PairwiseXorWithOneAncilla )
{
  const auto out = enumerate_ancilla_lp( gates::xor2(), bounded( 2, 2, 1 ) );
  ASSERT_TRUE( out.ok() );
  const auto rep = verify( *out.result, gates::xor2() );
  EXPECT_TRUE( rep.ok ) << rep.message;
  EXPECT_GT( rep.d, 0 );
  EXPECT_EQ( out.result->hamiltonian.spin_names().back(), "anc0" );
  EXPECT_EQ( stats_of( out.result->hamiltonian ),
             std::make_tuple( Rational{ -4 }, Rational{ 2 }, Rational{ 18 }, std::size_t{ 4 } ) );
  EXPECT_EQ( out.result->hamiltonian, two_body_library().at( GateKind::XOR ).hamiltonian );
}

TEST( Ancilla, ExtraAncillaNeverShrinksGap )
{
  const auto none = solve_lp( build_lp( gates::buf1(), bounded( 2, 1 ) ) );
  const auto one = enumerate_ancilla_lp( gates::buf1(), bounded( 2, 1, 1 ) );
  ASSERT_TRUE( none.ok() );
  ASSERT_TRUE( one.ok() );
  EXPECT_GE( verify( *one.result, gates::buf1() ).d, none.result->d );
}

TEST( Verify, RejectsZeroHamiltonian )
{
  SynthesisResult r{ Hamiltonian{ { "A", "B", "Y" } }, 0, 0, {} };
  EXPECT_FALSE( verify( r, gates::and2() ).ok );
}

TEST( Verify, ReportsViolation )
{
  auto r = two_level_construct( gates::and2(), -2, 2 );
  r.hamiltonian.add_term( { "A" }, 1 );
  const auto rep = verify( r, gates::and2() );
  EXPECT_FALSE( rep.ok );
  EXPECT_TRUE( rep.first_violation.has_value() );
}

TEST( GateLibrary, BodiesAreCorrectGates )
{
  for ( auto order : { BodyOrder::Two, BodyOrder::Three } )
    for ( const auto lib = library_for( order ); const auto& [k, body] : lib.bodies() )
    {
      SynthesisResult r{ body.hamiltonian, body.e_min, 0, {} };
      EXPECT_TRUE( verify( r, truth_table_of( k ) ).ok ) << to_string( k ) << " " << to_string( order );
      if ( order == BodyOrder::Two )
        EXPECT_LE( body.hamiltonian.max_order(), 2u );
    }
}

TEST( GateLibrary, PairwiseOrHasAndLandscape )
{
  EXPECT_EQ( stats_of( two_body_library().at( GateKind::OR ).hamiltonian ),
             std::make_tuple( Rational{ -3 }, Rational{ 4 }, Rational{ 12 }, std::size_t{ 3 } ) );
}

TEST( GateLibrary, ShippedJsonMatchesBuiltIn )
{
  const std::filesystem::path root{ INVLOGIC_SOURCE_DIR };
  for ( auto order : { BodyOrder::Two, BodyOrder::Three } )
    for ( const auto lib = library_for( order ); const auto& [k, body] : lib.bodies() )
    {
      std::string name{ to_string( k ) };
      for ( auto& c : name )
        c = static_cast<char>( std::tolower( c ) );
      const auto path =
          root / "data" / "gates" / ( order == BodyOrder::Two ? "two_body" : "three_body" ) / ( name + ".json" );
      ASSERT_TRUE( std::filesystem::exists( path ) ) << path;
      EXPECT_EQ( load_hamiltonian( path.string() ), body.hamiltonian ) << path;
    }
}
