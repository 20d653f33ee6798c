#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace
{
namespace fs = std::filesystem;

struct Run
{
  int code;
  std::string out;
  std::string err;
};

const fs::path& scratch()
{
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ( "invlogic_cli_" + std::to_string( ::getpid() ) );
    fs::create_directories( d );
    return d;
  }();
  return dir;
}

std::string slurp( const fs::path& p )
{
  std::ifstream in( p );
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run( const std::string& args )
{
  const auto out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
  const std::string cmd = std::string{ "'" } + INVLOGIC_CLI + "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system( cmd.c_str() );
  return { WIFEXITED( status ) ? WEXITSTATUS( status ) : -1, slurp( out ), slurp( err ) };
}

std::string data( const std::string& rel ) { return "'" + ( fs::path( INVLOGIC_SOURCE_DIR ) / "data" / rel ).string() + "'"; }
} // namespace

TEST( Cli, SynthAndByLpAndTwoLevel )
{
  const auto lp = run( "synth " + data( "tables/and.tt" ) + " --order 3 --bound 1" );
  ASSERT_EQ( lp.code, 0 ) << lp.err;
  const auto wht = run( "synth " + data( "tables/and.tt" ) + " --two-level -2,2" );
  ASSERT_EQ( wht.code, 0 ) << wht.err;
  EXPECT_EQ( lp.out, wht.out );
  EXPECT_EQ( lp.out, slurp( fs::path( INVLOGIC_SOURCE_DIR ) / "data" / "gates" / "three_body" / "and.json" ) );
  EXPECT_NE( lp.err.find( "E_min=-2 d=4" ), std::string::npos );
}

TEST( Cli, SynthPairwiseXorIsInfeasible )
{
  const auto r = run( "synth " + data( "tables/xor.tt" ) + " --order 2 --ancilla 0" );
  EXPECT_EQ( r.code, 2 );
  EXPECT_NE( r.err.find( "INFEASIBLE" ), std::string::npos );
  EXPECT_EQ( run( "synth " + data( "tables/and.tt" ) + " --no-bound" ).code, 2 );
}

TEST( Cli, SynthPairwiseXorWithAncilla )
{
  const auto r = run( "synth " + data( "tables/xor.tt" ) + " --order 2 --ancilla 1 --bound 2" );
  EXPECT_EQ( r.code, 0 ) << r.err;
  EXPECT_NE( r.err.find( "verify=ok" ), std::string::npos );
}

TEST( Cli, LandscapeStats )
{
  auto r = run( "landscape " + data( "gates/three_body/xor.json" ) );
  ASSERT_EQ( r.code, 0 );
  EXPECT_NE( r.out.find( "E_min=-2 dE_min=4 dE_max=4 N_EL=2" ), std::string::npos );
  r = run( "landscape " + data( "gates/two_body/and.json" ) );
  EXPECT_NE( r.out.find( "E_min=-3 dE_min=4 dE_max=12 N_EL=3" ), std::string::npos );
  r = run( "landscape " + data( "gates/three_body/and.json" ) + " --clamp Y=0" );
  EXPECT_NE( r.out.find( "ground_states=3" ), std::string::npos );
  for ( const char* s : { "\n000\n", "\n100\n", "\n010\n" } )
    EXPECT_NE( r.out.find( s ), std::string::npos ) << s;
}

TEST( Cli, AnnealIsDeterministic )
{
  const std::string args = "anneal --adder 2 --backward Y=5 --trials 10 --shots 4 --seed 1";
  const auto a = run( args ), b = run( args );
  ASSERT_EQ( a.code, 0 ) << a.err;
  EXPECT_EQ( a.out, b.out );
  EXPECT_EQ( a.out.rfind( "trial,shot,energy,converged\n", 0 ), 0u );
}

TEST( Cli, AnnealForwardComputesSum )
{
  const auto r = run( "anneal --adder 4 --forward A=7,B=8 --trials 10 --shots 16" );
  ASSERT_EQ( r.code, 0 ) << r.err;
  EXPECT_EQ( r.err.find( "Y=" ) == std::string::npos, false ) << r.err;
  std::regex line( "A=(\\d+) B=(\\d+) Y=(\\d+)" );
  for ( auto it = std::sregex_iterator( r.err.begin(), r.err.end(), line ); it != std::sregex_iterator(); ++it )
    EXPECT_EQ( ( *it )[3], "15" );
}

TEST( Cli, AnnealBackwardConvergenceRate )
{
  const auto r = run( "anneal --adder 4 --backward Y=9 --trials 100 --shots 16 --body 3" );
  ASSERT_EQ( r.code, 0 ) << r.err;
  std::smatch m;
  ASSERT_TRUE( std::regex_search( r.err, m, std::regex( "converged (\\d+)/100" ) ) ) << r.err;
  EXPECT_NE( r.err.find( "invalid=0" ), std::string::npos );
  EXPECT_GE( std::stoi( m[1] ), 90 );
}

TEST( Cli, AnnealRejectsBadClamp )
{
  EXPECT_EQ( run( "anneal --adder 2 --backward Y=9" ).code, 3 );
  EXPECT_EQ( run( "anneal --adder 2 --clamp nope=1" ).code, 3 );
}

TEST( Cli, AnnealReadsConfigFile )
{
  const auto cfg = scratch() / "cfg.txt";
  std::ofstream( cfg ) << "mode=boltzmann\nseed=4\nn_shot_max=2\n";
  const auto r = run( "anneal --adder 1 --backward Y=1 --trials 3 --config '" + cfg.string() + "'" );
  ASSERT_EQ( r.code, 0 ) << r.err;
  std::ofstream( cfg ) << "nonsense_key=1\n";
  EXPECT_EQ( run( "anneal --adder 1 --trials 1 --config '" + cfg.string() + "'" ).code, 3 );
}

TEST( Cli, EmuCheck )
{
  auto r = run( "emu-check --gate AND --cycles 1000" );
  EXPECT_EQ( r.code, 0 );
  EXPECT_NE( r.out.find( "identical" ), std::string::npos );
  EXPECT_EQ( run( "emu-check --adder 1 --cycles 1000" ).code, 0 );
  r = run( "emu-check --adder 1 --cycles 1000 --emu-bound 4" );
  EXPECT_EQ( r.code, 3 );
  EXPECT_NE( r.out.find( "divergence at cycle" ), std::string::npos );
}

TEST( Cli, BenchWritesReport )
{
  const auto csv = scratch() / "bench.csv", svg = scratch() / "bench.svg";
  const auto r = run( "bench --bits 1 --body both --trials 10 --shots 4 -o '" + csv.string() + "' --svg '" +
                      svg.string() + "'" );
  ASSERT_EQ( r.code, 0 ) << r.err;
  const auto three = slurp( scratch() / "bench_three.csv" );
  EXPECT_NE( three.find( "# config: body=3" ), std::string::npos );
  EXPECT_NE( three.find( "y,shot,convergence,non_convergence" ), std::string::npos );
  EXPECT_NE( slurp( scratch() / "bench_two.csv" ).find( "# config: body=2" ), std::string::npos );
  EXPECT_NE( slurp( svg ).find( "<svg" ), std::string::npos );
}

TEST( Cli, BenchGuardNeedsConfirmation )
{
  const auto r = run( "bench --bits 12 --trials 1000 --shots 256" );
  EXPECT_EQ( r.code, 3 );
  EXPECT_NE( r.err.find( "--confirm" ), std::string::npos );
}
