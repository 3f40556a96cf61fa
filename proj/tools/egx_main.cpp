#include <egx/bench.hpp>
#include <egx/ilp.hpp>
#include <egx/io.hpp>
#include <egx/pipeline.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace egx;

namespace
{

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInfeasible = 2;

struct usage_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct ExtractArgs
{
  std::string input;
  std::string mode = "greedy";
  std::string cost = "dag";
  std::string theta;
  unsigned workers = 1;
  std::size_t batch_size = 0;
  double timeout = 60.0;
  std::string dedup = "on";
  std::string output;
  std::string emit_lp;
  std::string emit_warmstart;
  bool stats = false;
  std::string bks;
  std::int64_t cost_scale = 1;
  std::string cost_rounding = "exact";
};

struct BenchArgs
{
  std::string corpus;
  std::string methods = "greedy+hybrid(1.25)";
  std::string bks;
  double timeout = 60.0;
  std::string report;
  std::string curves;
  unsigned jobs = 1;
  std::string dedup = "on";
};

struct DecodeArgs
{
  std::string input;
  std::string solution;
  std::string theta = "inf";
  std::string dedup = "on";
  std::string output;
};

CostScaling scaling_of( ExtractArgs const& a )
{
  CostScaling s;
  s.multiplier = a.cost_scale;
  if ( a.cost_rounding == "exact" )
    s.rounding = CostScaling::Rounding::exact;
  else if ( a.cost_rounding == "nearest" )
    s.rounding = CostScaling::Rounding::nearest;
  else if ( a.cost_rounding == "up" )
    s.rounding = CostScaling::Rounding::up;
  else if ( a.cost_rounding == "down" )
    s.rounding = CostScaling::Rounding::down;
  else
    throw usage_error( "--cost-rounding must be exact, nearest, up or down" );
  return s;
}

EGraph load_input( std::string const& path, DedupLevel dedup, CostScaling const& scaling, std::size_t* removed )
{
  auto g = load_egraph_file( path, scaling );
  if ( dedup == DedupLevel::off )
    return g;
  auto d = deduplicate( g, dedup == DedupLevel::aggressive );
  if ( removed )
    *removed = d.removed.size();
  return std::move( d.graph );
}

template<class Writer>
void write_to( std::string const& path, Writer&& writer )
{
  if ( path.empty() || path == "-" )
  {
    writer( std::cout );
    return;
  }
  std::ofstream out( path );
  if ( !out )
    throw std::runtime_error( "cannot write " + path );
  writer( out );
  if ( !out )
    throw std::runtime_error( "write failed for " + path );
}

std::optional<Cost> lookup_bks( std::string const& spec, std::string const& input )
{
  if ( spec.empty() )
    return std::nullopt;
  if ( spec.find_first_not_of( "0123456789" ) == std::string::npos )
    return Cost( std::stoull( spec ) );
  auto const table = load_bks( spec );
  auto const it = table.find( std::filesystem::path( input ).stem().string() );
  if ( it == table.end() )
    return std::nullopt;
  return Cost( it->second );
}

int run_extract( ExtractArgs const& a, CLI::App const& cmd )
{
  auto const mode = parse_mode( a.mode );
  auto const kind = parse_cost_kind( a.cost );
  auto const dedup = parse_dedup( a.dedup );
  bool const given_workers = cmd.count( "--workers" ) > 0;

  if ( !a.theta.empty() && mode != Mode::hybrid )
    throw usage_error( "--theta only applies to --mode hybrid" );
  if ( cmd.count( "--batch-size" ) && mode != Mode::parallel && mode != Mode::hybrid )
    throw usage_error( "--batch-size only applies to --mode parallel or hybrid" );
  if ( given_workers && mode != Mode::parallel && mode != Mode::hybrid )
    throw usage_error( "--workers only applies to --mode parallel or hybrid" );
  if ( cmd.count( "--timeout" ) && mode != Mode::exact && mode != Mode::hybrid )
    throw usage_error( "--timeout only applies to --mode exact or hybrid" );
  if ( kind != CostKind::dag && ( mode == Mode::exact || mode == Mode::hybrid ) )
    throw usage_error( "--mode exact and hybrid optimize the dag cost only" );
  if ( !a.emit_warmstart.empty() && mode == Mode::exact )
    throw usage_error( "--emit-warmstart needs a heuristic start (greedy, parallel or hybrid mode)" );
  if ( !( a.timeout > 0 ) )
    throw usage_error( "--timeout must be positive" );

  PipelineConfig cfg;
  cfg.mode = mode;
  cfg.cost = kind;
  cfg.theta = a.theta.empty() ? Rational( 5, 4 ) : Rational::parse( a.theta );
  if ( !cfg.theta.is_infinite() && cfg.theta < Rational( 1, 1 ) )
    throw usage_error( "--theta must be at least 1" );
  cfg.workers = a.workers;
  if ( !given_workers )
    if ( char const* env = std::getenv( "EGX_THREADS" ) )
    {
      try
      {
        cfg.workers = static_cast<unsigned>( std::stoul( env ) );
      }
      catch ( std::exception const& )
      {
        throw usage_error( "EGX_THREADS must be a positive integer" );
      }
    }
  if ( cfg.workers == 0 )
    throw usage_error( "--workers must be positive" );
  cfg.batch_size = a.batch_size;
  cfg.time_limit = a.timeout;

  std::size_t removed = 0;
  auto const g = load_input( a.input, dedup, scaling_of( a ), &removed );
  auto const outcome = run_pipeline( g, cfg );

  write_to( a.output, [&]( std::ostream& out ) { write_extraction( g, outcome.result, out ); } );

  if ( !a.emit_lp.empty() || !a.emit_warmstart.empty() )
  {
    auto const* mask = outcome.mask ? &*outcome.mask : nullptr;
    auto const* warm = outcome.heuristic && outcome.heuristic->result.valid ? &outcome.heuristic->result : nullptr;
    auto const model = build_ilp( g, mask, warm );
    if ( !a.emit_lp.empty() )
      write_to( a.emit_lp, [&]( std::ostream& out ) { emit_lp( model, out ); } );
    if ( !a.emit_warmstart.empty() )
    {
      if ( !warm )
        throw std::runtime_error( "no valid heuristic solution to use as warm start" );
      write_to( a.emit_warmstart, [&]( std::ostream& out ) { emit_warmstart( model, out ); } );
    }
  }

  if ( a.stats )
  {
    Cost h = Cost::infinity();
    if ( outcome.heuristic && kind == CostKind::dag )
      h = outcome.heuristic->result.valid ? outcome.heuristic->result.dag_cost : Cost::infinity();
    else
    {
      auto const greedy = extract_greedy( g ).result;
      h = greedy.valid ? greedy.dag_cost : Cost::infinity();
    }
    auto const final_cost = outcome.result.valid ? outcome.result.dag_cost : Cost::infinity();
    std::cerr << "nodes " << g.num_nodes() << "\n"
              << "classes " << g.num_classes() << "\n"
              << "dedup_removed " << removed << "\n";
    if ( outcome.mask )
      std::cerr << "pruned " << outcome.mask->num_pruned() << "/" << g.num_nodes() << " (theta "
                << outcome.mask->theta.to_display() << ")\n";
    std::cerr << "H " << h << "\n"
              << "final " << final_cost << "\n"
              << "status " << outcome.status << "\n"
              << "seconds " << outcome.total_seconds << "\n";
    if ( auto const bks = lookup_bks( a.bks, a.input ) )
    {
      auto const alpha = normalized_gap( final_cost, h, *bks );
      std::cerr << "BKS " << *bks << "\n"
                << "alpha " << ( alpha ? alpha->to_string() : std::string( "undefined" ) ) << "\n";
    }
  }
  return outcome.result.valid ? kOk : kInfeasible;
}

int run_bench( BenchArgs const& a )
{
  if ( !( a.timeout > 0 ) )
    throw usage_error( "--timeout must be positive" );
  std::vector<MethodConfig> methods;
  try
  {
    methods = parse_methods( a.methods );
  }
  catch ( std::invalid_argument const& e )
  {
    throw usage_error( std::string( "--methods: " ) + e.what() );
  }
  SuiteOptions options;
  options.time_limit = a.timeout;
  options.jobs = a.jobs == 0 ? 1 : a.jobs;
  options.dedup = parse_dedup( a.dedup );
  auto const bks = a.bks.empty() ? std::map<std::string, std::uint64_t>{} : load_bks( a.bks );
  auto const records = run_suite( list_corpus( a.corpus ), methods, bks, options );
  write_to( a.report, [&]( std::ostream& out ) { write_csv( records, out ); } );
  if ( !a.curves.empty() )
    write_to( a.curves, [&]( std::ostream& out ) { write_curves( records, out ); } );
  return kOk;
}

int run_decode( DecodeArgs const& a )
{
  auto const g = load_input( a.input, parse_dedup( a.dedup ), {}, nullptr );
  auto const theta = Rational::parse( a.theta );
  std::optional<PruneMask> mask;
  if ( !theta.is_infinite() )
    mask = prune( g, extract_greedy( g ).costs, theta );
  auto const model = build_ilp( g, mask ? &*mask : nullptr );
  std::ifstream in( a.solution );
  if ( !in )
    throw std::runtime_error( "cannot open " + a.solution );
  auto const result = parse_solution( model, g, in );
  write_to( a.output, [&]( std::ostream& out ) { write_extraction( g, result, out ); } );
  return result.valid ? kOk : kInfeasible;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "e-graph extraction: greedy, parallel, exact and hybrid" };
  app.require_subcommand( 1 );

  ExtractArgs ex;
  auto* extract = app.add_subcommand( "extract", "extract one e-graph" );
  extract->add_option( "--input", ex.input, "e-graph JSON" )->required();
  extract->add_option( "--mode", ex.mode, "greedy|parallel|exact|hybrid" )
      ->check( CLI::IsMember( { "greedy", "parallel", "exact", "hybrid" } ) );
  extract->add_option( "--cost", ex.cost, "dag|tree|depth" )->check( CLI::IsMember( { "dag", "tree", "depth" } ) );
  extract->add_option( "--theta", ex.theta, "pruning threshold (>= 1) or inf; hybrid only, default 1.25" );
  extract->add_option( "--workers", ex.workers, "worker threads (default: EGX_THREADS or 1)" );
  extract->add_option( "--batch-size", ex.batch_size, "nodes per parallel batch (default 4 x workers)" );
  extract->add_option( "--timeout", ex.timeout, "exact solver time limit in seconds" );
  extract->add_option( "--dedup", ex.dedup, "on|off|aggressive" )->check( CLI::IsMember( { "on", "off", "aggressive" } ) );
  extract->add_option( "--output", ex.output, "extraction JSON (default stdout)" );
  extract->add_option( "--emit-lp", ex.emit_lp, "write the ILP in LP format" );
  extract->add_option( "--emit-warmstart", ex.emit_warmstart, "write the heuristic start" );
  extract->add_flag( "--stats", ex.stats, "print statistics to stderr" );
  extract->add_option( "--bks", ex.bks, "best known cost, or a JSON file of name -> cost" );
  extract->add_option( "--cost-scale", ex.cost_scale, "multiply input costs before rounding" )->check( CLI::PositiveNumber );
  extract->add_option( "--cost-rounding", ex.cost_rounding, "exact|nearest|up|down" );

  BenchArgs be;
  auto* bench = app.add_subcommand( "bench", "run methods over a corpus and report normalized gaps" );
  bench->add_option( "--corpus", be.corpus, "directory of e-graph JSON files" )->required();
  bench->add_option( "--methods", be.methods, "e.g. greedy+parallel(8)+hybrid(1.25)+exact" );
  bench->add_option( "--bks", be.bks, "JSON map of benchmark -> best known cost" );
  bench->add_option( "--timeout", be.timeout, "per-run exact solver time limit in seconds" );
  bench->add_option( "--report", be.report, "CSV output (default stdout)" );
  bench->add_option( "--curves", be.curves, "CSV of time to reach alpha targets" );
  bench->add_option( "--jobs", be.jobs, "benchmarks run concurrently" );
  bench->add_option( "--dedup", be.dedup, "on|off|aggressive" )->check( CLI::IsMember( { "on", "off", "aggressive" } ) );

  DecodeArgs de;
  auto* decode = app.add_subcommand( "decode", "turn a solver solution file into an extraction" );
  decode->add_option( "--input", de.input, "e-graph JSON" )->required();
  decode->add_option( "--solution", de.solution, "lines of '<variable> <value>'" )->required();
  decode->add_option( "--theta", de.theta, "threshold the model was built with (default inf)" );
  decode->add_option( "--dedup", de.dedup, "on|off|aggressive" )->check( CLI::IsMember( { "on", "off", "aggressive" } ) );
  decode->add_option( "--output", de.output, "extraction JSON (default stdout)" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e );
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* active = extract->parsed() ? extract : bench->parsed() ? bench : decode;
  try
  {
    if ( active == extract )
      return run_extract( ex, *extract );
    if ( active == bench )
      return run_bench( be );
    return run_decode( de );
  }
  catch ( usage_error const& e )
  {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kUsage;
  }
  catch ( std::invalid_argument const& e )
  {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kUsage;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
