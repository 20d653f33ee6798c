// Command-line front end: synthesis, landscapes, annealing, benchmarks, emulator checks.

#include <invlogic/bench.hpp>
#include <invlogic/config.hpp>
#include <invlogic/engine.hpp>
#include <invlogic/gate_library.hpp>
#include <invlogic/hamiltonian_json.hpp>
#include <invlogic/landscape.hpp>
#include <invlogic/netlist.hpp>
#include <invlogic/sc_emu.hpp>
#include <invlogic/synth.hpp>
#include <invlogic/truth_table.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace invlogic;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_infeasible = 2;
constexpr int exit_invalid = 3;

struct Failure
{
  int code;
  std::string message;
};

std::vector<std::string> split( const std::string& s, char sep )
{
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in( s );
  while ( std::getline( in, cur, sep ) )
    if ( !cur.empty() )
      out.push_back( cur );
  return out;
}

/// "A=7,B=8" -> {A: 7, B: 8}
std::map<std::string, std::uint64_t> parse_assignments( const std::vector<std::string>& items )
{
  std::map<std::string, std::uint64_t> out;
  for ( const auto& item : items )
    for ( const auto& kv : split( item, ',' ) )
    {
      const auto eq = kv.find( '=' );
      if ( eq == std::string::npos || eq == 0 )
        throw Failure{ exit_invalid, "expected NAME=VALUE, got '" + kv + "'" };
      try
      {
        std::size_t pos = 0;
        const std::string v = kv.substr( eq + 1 );
        const auto value = std::stoull( v, &pos, 0 );
        if ( pos != v.size() )
          throw std::invalid_argument( v );
        out[kv.substr( 0, eq )] = value;
      }
      catch ( const std::exception& )
      {
        throw Failure{ exit_invalid, "bad value in '" + kv + "'" };
      }
    }
  return out;
}

void write_text( const std::string& path, const std::string& text )
{
  if ( path.empty() || path == "-" )
  {
    std::cout << text;
    return;
  }
  std::ofstream out( path );
  if ( !out )
    throw Failure{ exit_invalid, "cannot write '" + path + "'" };
  out << text;
}

BodyOrder body_of( int b )
{
  if ( b != 2 && b != 3 )
    throw Failure{ exit_invalid, "--body must be 2 or 3" };
  return static_cast<BodyOrder>( b );
}

// ---------------------------------------------------------------- synth

struct SynthArgs
{
  std::string table;
  int order = 3;
  int ancilla = 0;
  std::string bound = "1";
  bool no_bound = false;
  bool constant = false;
  std::string two_level;
  std::string out;
};

int cmd_synth( const SynthArgs& a )
{
  const TruthTable tt = load_truth_table( a.table );
  SynthesisResult result;
  if ( !a.two_level.empty() )
  {
    const auto parts = split( a.two_level, ',' );
    if ( parts.size() != 2 )
      throw Failure{ exit_invalid, "--two-level expects EV,EI" };
    result = two_level_construct( tt, parse_rational( parts[0] ), parse_rational( parts[1] ) );
  }
  else
  {
    BasisSpec basis;
    basis.max_order = a.order;
    basis.num_ancilla = a.ancilla;
    basis.include_constant = a.constant;
    if ( a.no_bound )
      basis.coeff_bound.reset();
    else
      basis.coeff_bound = parse_rational( a.bound );
    const auto outcome =
        a.ancilla > 0 ? enumerate_ancilla_lp( tt, basis ) : solve_lp( build_lp( tt, basis ) );
    if ( !outcome.ok() )
      throw Failure{ exit_infeasible, std::string{ "synthesis " } + to_string( outcome.status ) };
    result = *outcome.result;
  }
  const auto rep = verify( result, tt );
  write_text( a.out, to_json( result.hamiltonian ).dump( 2 ) + "\n" );
  std::cerr << "E_min=" << to_string( rep.e_min ) << " d=" << to_string( rep.d )
            << " dE_max=" << to_string( rep.delta_e_max ) << " N_EL=" << rep.n_levels << " verify=" << rep.message
            << "\n";
  return rep.ok ? exit_ok : exit_invalid;
}

// ---------------------------------------------------------------- landscape

struct LandscapeArgs
{
  std::string file;
  std::vector<std::string> clamps;
  std::size_t cap = 24;
};

int cmd_landscape( const LandscapeArgs& a )
{
  const Hamiltonian h = load_hamiltonian( a.file );
  std::map<std::string, std::int8_t> fixed;
  for ( const auto& [name, v] : parse_assignments( a.clamps ) )
  {
    if ( v > 1 )
      throw Failure{ exit_invalid, "clamp values must be 0 or 1" };
    if ( !h.find_spin( name ) )
      throw Failure{ exit_invalid, "unknown spin '" + name + "'" };
    fixed[name] = spin_of_bit( static_cast<int>( v ) );
  }
  LandscapeOptions opt;
  opt.max_free_spins = a.cap;
  const auto st = enumerate_landscape( h, fixed, opt );
  std::cout << "E_min=" << to_string( st.e_min ) << " dE_min=" << to_string( st.delta_e_min )
            << " dE_max=" << to_string( st.delta_e_max ) << " N_EL=" << st.n_levels << "\n";
  std::cout << "ground_states=" << st.ground_state_count << " (";
  for ( std::size_t i = 0; i < h.num_spins(); ++i )
    std::cout << h.spin_name( static_cast<SpinIndex>( i ) );
  std::cout << ")\n";
  for ( const auto& s : st.ground_states )
    std::cout << s.bit_string() << "\n";
  return exit_ok;
}

// ---------------------------------------------------------------- shared circuit / config options

struct CircuitArgs
{
  std::string netlist;
  int adder = 0;
  int body = 3;
};

CircuitHamiltonian load_circuit( const CircuitArgs& c )
{
  if ( c.netlist.empty() == ( c.adder == 0 ) )
    throw Failure{ exit_invalid, "give exactly one of --netlist or --adder" };
  const Netlist nl = c.adder ? ripple_adder( c.adder ) : load_netlist( c.netlist );
  return elaborate( nl, library_for( body_of( c.body ) ) );
}

struct EngineArgs
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> shots;
  std::string mode;
  std::string order;
  std::optional<int> bound_L;
};

AnnealConfig engine_config( const EngineArgs& e )
{
  AnnealConfig cfg = e.config.empty() ? AnnealConfig{} : anneal_config_from( load_config( e.config ) );
  if ( e.seed )
    cfg.seed = *e.seed;
  if ( e.shots )
    cfg.n_shot_max = *e.shots;
  if ( !e.mode.empty() )
    cfg.mode = parse_update_mode( e.mode );
  if ( !e.order.empty() )
    cfg.update_order = parse_update_order( e.order );
  if ( e.bound_L )
    cfg.counter_bound_L = *e.bound_L;
  cfg.validate();
  return cfg;
}

void add_engine_options( CLI::App* app, EngineArgs& e )
{
  app->add_option( "--config", e.config, "flat key=value config file" );
  app->add_option( "--seed", e.seed, "base seed" );
  app->add_option( "--mode", e.mode, "counter|sign|boltzmann" );
  app->add_option( "--order", e.order, "sync|sweep" );
  app->add_option( "--counter-bound", e.bound_L, "counter bound L" );
}

// ---------------------------------------------------------------- anneal

struct AnnealArgs
{
  CircuitArgs circuit;
  EngineArgs engine;
  std::vector<std::string> forward;
  std::vector<std::string> backward;
  std::vector<std::string> clamps;
  std::size_t trials = 1;
  unsigned threads = 0;
  std::string out;
};

int cmd_anneal( AnnealArgs a )
{
  CircuitHamiltonian ch = load_circuit( a.circuit );
  AnnealConfig cfg = engine_config( a.engine );
  cfg.record_trace = true;

  ClampMode mode;
  for ( const auto& [w, v] : parse_assignments( a.forward ) )
    mode.words[w] = v;
  for ( const auto& [w, v] : parse_assignments( a.backward ) )
    mode.words[w] = v;
  for ( const auto& [n, v] : parse_assignments( a.clamps ) )
  {
    if ( v > 1 )
      throw Failure{ exit_invalid, "net clamps must be 0 or 1" };
    mode.nets[n] = static_cast<int>( v );
  }
  try
  {
    ch = clamp_mode( ch, mode );
  }
  catch ( const std::exception& e )
  {
    throw Failure{ exit_invalid, e.what() };
  }

  const auto results = run_trials( ch, cfg, a.trials, a.threads );
  std::ostringstream csv;
  csv << "trial,shot,energy,converged\n";
  std::size_t converged = 0, invalid = 0;
  double shot_sum = 0;
  const bool adder_words = ch.netlist.inputs.contains( "A" ) && ch.netlist.inputs.contains( "B" ) &&
                           ch.netlist.outputs.contains( "Y" );
  for ( std::size_t t = 0; t < results.size(); ++t )
  {
    const auto& r = results[t];
    for ( std::size_t s = 0; s < r.energy_trace.size(); ++s )
      csv << t << ',' << s + 1 << ',' << to_string( r.energy_trace[s] ) << ','
          << ( r.converged && s + 1 == r.energy_trace.size() ? 1 : 0 ) << '\n';
    if ( !r.converged )
      continue;
    ++converged;
    shot_sum += r.shots_used;
    const auto vals = net_values( ch, r.final_state );
    bool ok = gates_consistent( ch.netlist, vals );
    if ( adder_words )
      ok = ok && read_word( ch.netlist, vals, "A" ) + read_word( ch.netlist, vals, "B" ) ==
                     read_word( ch.netlist, vals, "Y" );
    invalid += ok ? 0 : 1;
    if ( adder_words && a.trials <= 20 )
      std::cerr << "trial " << t << ": A=" << read_word( ch.netlist, vals, "A" )
                << " B=" << read_word( ch.netlist, vals, "B" ) << " Y=" << read_word( ch.netlist, vals, "Y" ) << "\n";
  }
  write_text( a.out, csv.str() );
  std::cerr << "converged " << converged << "/" << results.size();
  if ( converged )
    std::cerr << " mean_shots=" << shot_sum / static_cast<double>( converged );
  std::cerr << " invalid=" << invalid << " ground_energy=" << to_string( ch.ground_energy ) << "\n";
  return invalid ? exit_invalid : exit_ok;
}

// ---------------------------------------------------------------- bench

struct BenchArgs
{
  EngineArgs engine;
  std::optional<int> bits;
  std::string body;
  std::optional<int> trials;
  std::optional<int> shots;
  std::string y_set;
  std::optional<int> sample_k;
  std::optional<std::uint64_t> sample_seed;
  bool include_unachievable = false;
  bool confirm = false;
  unsigned threads = 0;
  std::string out;
  std::string svg;
};

std::string with_suffix( const std::string& path, const std::string& suffix )
{
  std::filesystem::path p( path );
  return ( p.parent_path() / ( p.stem().string() + "_" + suffix + p.extension().string() ) ).string();
}

int cmd_bench( const BenchArgs& a )
{
  BenchSpec base;
  if ( !a.engine.config.empty() )
    base = bench_spec_from( load_config( a.engine.config ) );
  else if ( a.bits )
    base = BenchSpec::defaults_for( *a.bits );
  if ( a.bits )
    base.adder_bits = *a.bits;
  if ( a.trials )
    base.trials_per_y = *a.trials;
  if ( a.shots )
    base.shots_max = *a.shots;
  if ( a.y_set == "all" )
    base.y_set = YSet::AllAchievable;
  else if ( a.y_set == "sample" )
    base.y_set = YSet::Sample;
  else if ( !a.y_set.empty() )
    throw Failure{ exit_invalid, "--y-set must be all or sample" };
  if ( a.sample_k )
  {
    base.y_set = YSet::Sample;
    base.sample_k = *a.sample_k;
  }
  if ( a.sample_seed )
    base.sample_seed = *a.sample_seed;
  if ( a.include_unachievable )
    base.include_unachievable = true;
  if ( a.engine.seed )
    base.cfg.seed = *a.engine.seed;
  if ( !a.engine.mode.empty() )
    base.cfg.mode = parse_update_mode( a.engine.mode );
  if ( !a.engine.order.empty() )
    base.cfg.update_order = parse_update_order( a.engine.order );
  if ( a.engine.bound_L )
    base.cfg.counter_bound_L = *a.engine.bound_L;
  base.cfg.n_shot_max = base.shots_max;

  std::vector<BodyOrder> bodies;
  if ( a.body.empty() )
    bodies = { base.body };
  else if ( a.body == "both" )
    bodies = { BodyOrder::Three, BodyOrder::Two };
  else
    bodies = { body_of( std::stoi( a.body ) ) };

  std::vector<ConvergenceReport> reports;
  for ( auto b : bodies )
  {
    BenchSpec s = base;
    s.body = b;
    const double est = estimated_spin_updates( s );
    std::cerr << to_string( b ) << ": " << bench_y_values( s ).size() << " y values, estimated spin updates " << est
              << "\n";
    if ( est > desk_scale_limit && !a.confirm )
      throw Failure{ exit_invalid, "estimated work exceeds 1e10 spin updates; pass --confirm to run" };
    reports.push_back( run_bench( s, true, a.threads ) );
  }

  int code = exit_ok;
  for ( const auto& r : reports )
  {
    std::ostringstream csv;
    write_report_csv( csv, r );
    const std::string path =
        reports.size() > 1 && !a.out.empty() && a.out != "-"
            ? with_suffix( a.out, r.spec.body == BodyOrder::Two ? "two" : "three" )
            : a.out;
    write_text( path, csv.str() );
    std::cerr << to_string( r.spec.body ) << " mean convergence:";
    for ( int s = 1; s <= r.spec.shots_max; s *= 2 )
      std::cerr << " shot" << s << "=" << format_rate( r.mean_convergence[s - 1] );
    const int below = r.first_shot_below( 0.1 );
    std::cerr << "; non-convergence < 0.1 from shot " << ( below ? std::to_string( below ) : "never" )
              << "; invalid converged " << r.invalid_converged << "; hash " << r.hash << "\n";
    if ( r.invalid_converged )
      code = exit_invalid;
  }
  if ( !a.svg.empty() )
  {
    std::vector<const ConvergenceReport*> ptrs;
    for ( const auto& r : reports )
      ptrs.push_back( &r );
    std::ofstream svg( a.svg );
    write_svg( svg, ptrs );
  }
  return code;
}

// ---------------------------------------------------------------- emu-check

struct EmuArgs
{
  CircuitArgs circuit;
  EngineArgs engine;
  std::string gate;
  std::string hamiltonian;
  std::uint64_t cycles = 1000;
  std::optional<std::int64_t> emu_bound;
  std::string trace;
};

int cmd_emu_check( const EmuArgs& a )
{
  CircuitHamiltonian ch;
  if ( !a.gate.empty() )
  {
    Netlist nl;
    const GateKind k = parse_gate_kind( a.gate );
    const auto tt = truth_table_of( k );
    nl.nets = tt.names();
    nl.gates.push_back( { k, tt.names() } );
    ch = elaborate( nl, library_for( body_of( a.circuit.body ) ) );
  }
  else if ( !a.hamiltonian.empty() )
  {
    ch.hamiltonian = load_hamiltonian( a.hamiltonian );
    ch.ground_energy = enumerate_landscape( ch.hamiltonian ).e_min;
  }
  else
    ch = load_circuit( a.circuit );

  const AnnealConfig cfg = engine_config( a.engine );
  std::ofstream trace_file;
  if ( !a.trace.empty() )
  {
    trace_file.open( a.trace );
    if ( !trace_file )
      throw Failure{ exit_invalid, "cannot write '" + a.trace + "'" };
  }
  const auto rep = sc::equivalence_check( ch, cfg, a.cycles, a.emu_bound, a.trace.empty() ? nullptr : &trace_file );
  std::cout << rep.message() << "\n";
  return rep.identical ? exit_ok : exit_invalid;
}

// ---------------------------------------------------------------- gates

int cmd_gates( const std::string& dir )
{
  for ( auto order : { BodyOrder::Two, BodyOrder::Three } )
  {
    const auto lib = library_for( order );
    const std::filesystem::path sub =
        std::filesystem::path( dir ) / ( order == BodyOrder::Two ? "two_body" : "three_body" );
    std::filesystem::create_directories( sub );
    for ( const auto& [k, body] : lib.bodies() )
    {
      std::string name{ to_string( k ) };
      for ( auto& c : name )
        c = static_cast<char>( std::tolower( static_cast<unsigned char>( c ) ) );
      std::ofstream out( sub / ( name + ".json" ) );
      out << to_json( body.hamiltonian ).dump( 2 ) << "\n";
    }
  }
  return exit_ok;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "invertible logic with many-body Ising Hamiltonians" };
  app.require_subcommand( 1 );

  SynthArgs synth;
  auto* s = app.add_subcommand( "synth", "synthesize a Hamiltonian from a truth table" );
  s->add_option( "table", synth.table, "truth table file" )->required();
  s->add_option( "--order", synth.order, "maximum interaction order" );
  s->add_option( "--ancilla", synth.ancilla, "number of ancilla spins" );
  s->add_option( "--bound", synth.bound, "coefficient bound |c| <= B" );
  s->add_flag( "--no-bound", synth.no_bound, "drop the coefficient bound" );
  s->add_flag( "--constant", synth.constant, "include a constant term variable" );
  s->add_option( "--two-level", synth.two_level, "EV,EI: closed-form two-level construction" );
  s->add_option( "-o,--output", synth.out, "output JSON (default stdout)" );

  LandscapeArgs land;
  auto* l = app.add_subcommand( "landscape", "exact landscape statistics" );
  l->add_option( "hamiltonian", land.file, "Hamiltonian JSON" )->required();
  l->add_option( "--clamp", land.clamps, "SPIN=BIT[,...]" );
  l->add_option( "--cap", land.cap, "maximum free spins" );

  AnnealArgs ann;
  auto* an = app.add_subcommand( "anneal", "run annealing trials" );
  an->add_option( "--netlist", ann.circuit.netlist, "netlist JSON" );
  an->add_option( "--adder", ann.circuit.adder, "n-bit ripple-carry adder" );
  an->add_option( "--body", ann.circuit.body, "gate library: 2 or 3" );
  an->add_option( "--forward", ann.forward, "WORD=VALUE[,...] input clamps" );
  an->add_option( "--backward", ann.backward, "WORD=VALUE[,...] output clamps" );
  an->add_option( "--clamp", ann.clamps, "NET=BIT[,...]" );
  an->add_option( "--trials", ann.trials, "number of trials" );
  an->add_option( "--shots", ann.engine.shots, "maximum shots per trial" );
  an->add_option( "--threads", ann.threads, "worker threads (0 = all cores)" );
  an->add_option( "-o,--output", ann.out, "CSV output (default stdout)" );
  add_engine_options( an, ann.engine );

  BenchArgs bench;
  auto* b = app.add_subcommand( "bench", "backward-mode adder convergence sweep" );
  b->add_option( "--bits", bench.bits, "adder width" );
  b->add_option( "--body", bench.body, "2, 3 or both" );
  b->add_option( "--trials", bench.trials, "trials per y" );
  b->add_option( "--shots", bench.shots, "maximum shots" );
  b->add_option( "--y-set", bench.y_set, "all or sample" );
  b->add_option( "--sample", bench.sample_k, "sample this many y values" );
  b->add_option( "--sample-seed", bench.sample_seed, "seed of the y sample" );
  b->add_flag( "--include-unachievable", bench.include_unachievable, "also sweep y = 2^(n+1) - 1" );
  b->add_flag( "--confirm", bench.confirm, "allow runs above 1e10 spin updates" );
  b->add_option( "--threads", bench.threads, "worker threads (0 = all cores)" );
  b->add_option( "-o,--output", bench.out, "CSV output (default stdout)" );
  b->add_option( "--svg", bench.svg, "SVG plot of mean convergence" );
  add_engine_options( b, bench.engine );

  EmuArgs emu;
  auto* e = app.add_subcommand( "emu-check", "compare the bit-level emulator against the engine" );
  e->add_option( "--gate", emu.gate, "single gate (AND, OR, XOR, ...)" );
  e->add_option( "--hamiltonian", emu.hamiltonian, "Hamiltonian JSON" );
  e->add_option( "--netlist", emu.circuit.netlist, "netlist JSON" );
  e->add_option( "--adder", emu.circuit.adder, "n-bit ripple-carry adder" );
  e->add_option( "--body", emu.circuit.body, "gate library: 2 or 3" );
  e->add_option( "--cycles", emu.cycles, "cycles to compare" );
  e->add_option( "--emu-bound", emu.emu_bound, "override the emulator's counter bound" );
  e->add_option( "--trace", emu.trace, "CSV trace of the emulator" );
  add_engine_options( e, emu.engine );

  std::string gates_dir = "data/gates";
  auto* g = app.add_subcommand( "gates", "write the built-in gate libraries as JSON" );
  g->add_option( "--out-dir", gates_dir, "output directory" );

  CLI11_PARSE( app, argc, argv );

  try
  {
    if ( *s )
      return cmd_synth( synth );
    if ( *l )
      return cmd_landscape( land );
    if ( *an )
      return cmd_anneal( ann );
    if ( *b )
      return cmd_bench( bench );
    if ( *e )
      return cmd_emu_check( emu );
    if ( *g )
      return cmd_gates( gates_dir );
  }
  catch ( const Failure& f )
  {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  catch ( const std::exception& ex )
  {
    std::cerr << "error: " << ex.what() << "\n";
    return exit_invalid;
  }
  return exit_ok;
}
