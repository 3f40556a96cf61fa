#include <doctest.h>

#include "support.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace egx::test;
namespace fs = std::filesystem;

namespace
{

fs::path workdir()
{
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / "egx_cli_tests";
    fs::remove_all( d );
    fs::create_directories( d );
    return d;
  }();
  return dir;
}

std::string slurp( fs::path const& p )
{
  std::ifstream in( p );
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Runs the CLI with stdout and stderr captured into files; returns the exit code.
int run_cli( std::string const& args, std::string const& env = {} )
{
  auto const cmd = env + ( env.empty() ? "" : " " ) + std::string( EGX_CLI ) + " " + args + " > " +
                   ( workdir() / "stdout.txt" ).string() + " 2> " + ( workdir() / "stderr.txt" ).string();
  auto const status = std::system( cmd.c_str() );
  return WIFEXITED( status ) ? WEXITSTATUS( status ) : -1;
}

std::string out_text()
{
  return slurp( workdir() / "stdout.txt" );
}

std::string err_text()
{
  return slurp( workdir() / "stderr.txt" );
}

std::string fig2_path()
{
  return ( data_dir() / "fig2.json" ).string();
}

long dag_cost_of( fs::path const& p )
{
  return nlohmann::json::parse( slurp( p ) )["dag_cost"].get<long>();
}

} // namespace

TEST_SUITE( "cli" )
{
  TEST_CASE( "greedy, hybrid and degenerate parallel on fig2" )
  {
    auto const greedy = workdir() / "greedy.json";
    auto const hybrid = workdir() / "hybrid.json";
    auto const parallel = workdir() / "parallel.json";
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode greedy --cost dag --output " + greedy.string() ) == 0 );
    CHECK( dag_cost_of( greedy ) == 17 );
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode hybrid --theta 1.25 --output " + hybrid.string() ) == 0 );
    CHECK( dag_cost_of( hybrid ) == 16 );
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode parallel --workers 1 --batch-size 1 --output " +
                parallel.string() ) == 0 );
    CHECK( slurp( parallel ) == slurp( greedy ) );
  }

  TEST_CASE( "stdout carries the extraction when no output file is given" )
  {
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode exact" ) == 0 );
    auto const j = nlohmann::json::parse( out_text() );
    CHECK( j["dag_cost"] == 16 );
    CHECK( j["valid"] == true );
    CHECK( err_text().empty() );
  }

  TEST_CASE( "stats report the gap" )
  {
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode hybrid --stats --bks 16 --output " +
                ( workdir() / "s.json" ).string() ) == 0 );
    auto const err = err_text();
    CHECK( err.find( "H 17" ) != std::string::npos );
    CHECK( err.find( "final 16" ) != std::string::npos );
    CHECK( err.find( "alpha 0" ) != std::string::npos );
    CHECK( err.find( "pruned 2/10" ) != std::string::npos );
  }

  TEST_CASE( "usage errors exit with 1" )
  {
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode greedy --theta 1.25" ) == 1 );
    CHECK( err_text().find( "--theta" ) != std::string::npos );
    CHECK( err_text().find( "Usage" ) != std::string::npos );
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode exact --cost tree" ) == 1 );
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode hybrid --theta 0.5" ) == 1 );
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode bogus" ) == 1 );
    CHECK( run_cli( "extract --input /nonexistent.json" ) == 1 );
    CHECK( run_cli( "extract" ) == 1 );
    CHECK( run_cli( "" ) == 1 );
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode parallel", "EGX_THREADS=abc" ) == 1 );
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode parallel --output " + ( workdir() / "env.json" ).string(),
                "EGX_THREADS=4" ) == 0 );
    CHECK( dag_cost_of( workdir() / "env.json" ) == 17 );
  }

  TEST_CASE( "infeasible instances exit with 2" )
  {
    auto const path = workdir() / "loop.json";
    std::ofstream( path ) << R"({"nodes": {"n": {"op": "f", "children": ["n"], "eclass": "c", "cost": 1}},
                                 "root_eclasses": ["c"]})";
    CHECK( run_cli( "extract --input " + path.string() + " --output " + ( workdir() / "loop_out.json" ).string() ) == 2 );
    auto const j = nlohmann::json::parse( slurp( workdir() / "loop_out.json" ) );
    CHECK( j["valid"] == false );
    CHECK( j["dag_cost"].is_null() );
    CHECK( run_cli( "extract --input " + path.string() + " --mode exact" ) == 2 );
  }

  TEST_CASE( "emitted start decodes back to the greedy cost" )
  {
    auto const lp = workdir() / "m.lp";
    auto const warm = workdir() / "m.mst";
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode hybrid --theta 1.25 --emit-lp " + lp.string() +
                " --emit-warmstart " + warm.string() + " --output " + ( workdir() / "h.json" ).string() ) == 0 );
    CHECK( slurp( lp ).find( "Minimize" ) != std::string::npos );
    CHECK( run_cli( "decode --input " + fig2_path() + " --theta 1.25 --solution " + warm.string() + " --output " +
                ( workdir() / "decoded.json" ).string() ) == 0 );
    CHECK( dag_cost_of( workdir() / "decoded.json" ) == 17 );

    auto const lp2 = workdir() / "m2.lp";
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode hybrid --theta 1.25 --emit-lp " + lp2.string() +
                " --output " + ( workdir() / "h2.json" ).string() ) == 0 );
    CHECK( slurp( lp ) == slurp( lp2 ) );
    CHECK( run_cli( "extract --input " + fig2_path() + " --mode exact --emit-warmstart " + warm.string() ) == 1 );
  }

  TEST_CASE( "bench reports" )
  {
    auto const corpus = workdir() / "corpus";
    fs::create_directories( corpus );
    fs::copy_file( fig2_path(), corpus / "fig2.json", fs::copy_options::overwrite_existing );
    auto const bks = workdir() / "bks.json";
    std::ofstream( bks ) << R"({"fig2": 16})";
    auto const report = workdir() / "report.csv";
    CHECK( run_cli( "bench --corpus " + corpus.string() + " --methods 'greedy+hybrid(1.25)' --bks " + bks.string() +
                " --timeout 10 --report " + report.string() ) == 0 );
    auto const csv = slurp( report );
    std::istringstream lines( csv );
    std::string header, greedy, hybrid;
    std::getline( lines, header );
    std::getline( lines, greedy );
    std::getline( lines, hybrid );
    CHECK( header == "benchmark,method,theta,workers,wall_time_s,cost,H,BKS,alpha,status" );
    CHECK( greedy.find( ",17,17,16,1,heuristic" ) != std::string::npos );
    CHECK( hybrid.find( ",16,17,16,0,optimal" ) != std::string::npos );

    auto const empty = workdir() / "empty";
    fs::create_directories( empty );
    CHECK( run_cli( "bench --corpus " + empty.string() + " --report " + ( workdir() / "empty.csv" ).string() ) == 0 );
    CHECK( slurp( workdir() / "empty.csv" ) == header + "\n" );

    CHECK( run_cli( "bench --corpus " + corpus.string() + " --methods 'greedy+hybird(1.25)'" ) == 1 );
    CHECK( err_text().find( "Usage" ) != std::string::npos );
    CHECK( run_cli( "bench --corpus " + ( workdir() / "nope" ).string() ) == 1 );
    CHECK( run_cli( "bench --corpus " + corpus.string() + " --bks " + ( workdir() / "nope.json" ).string() ) == 1 );
  }
}
