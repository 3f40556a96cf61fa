#include <egx/parallel.hpp>
#include <egx/pipeline.hpp>

#include <chrono>
#include <stdexcept>

namespace egx
{

Mode parse_mode( std::string_view text )
{
  if ( text == "greedy" )
    return Mode::greedy;
  if ( text == "parallel" )
    return Mode::parallel;
  if ( text == "exact" )
    return Mode::exact;
  if ( text == "hybrid" )
    return Mode::hybrid;
  throw std::invalid_argument( "unknown mode '" + std::string( text ) + "'" );
}

std::string_view to_string( Mode mode )
{
  switch ( mode )
  {
  case Mode::greedy:
    return "greedy";
  case Mode::parallel:
    return "parallel";
  case Mode::exact:
    return "exact";
  case Mode::hybrid:
    return "hybrid";
  }
  return "?";
}

DedupLevel parse_dedup( std::string_view text )
{
  if ( text == "off" )
    return DedupLevel::off;
  if ( text == "on" )
    return DedupLevel::on;
  if ( text == "aggressive" )
    return DedupLevel::aggressive;
  throw std::invalid_argument( "unknown dedup level '" + std::string( text ) + "'" );
}

PipelineOutcome run_pipeline( EGraph const& egraph, PipelineConfig const& config )
{
  using clock = std::chrono::steady_clock;
  auto const start = clock::now();
  auto since_start = [&] { return std::chrono::duration<double>( clock::now() - start ).count(); };

  if ( ( config.mode == Mode::exact || config.mode == Mode::hybrid ) && config.cost != CostKind::dag )
    throw std::invalid_argument( "exact and hybrid modes optimize the dag cost only" );

  PipelineOutcome out;
  auto run_heuristic = [&]( CostKind kind ) {
    if ( config.mode == Mode::greedy || config.workers <= 1 )
      out.heuristic = extract_greedy( egraph, kind );
    else
      out.heuristic = extract_parallel( egraph, kind, { config.workers, config.batch_size, nullptr } );
    out.heuristic_seconds = since_start();
  };

  if ( config.mode == Mode::greedy || config.mode == Mode::parallel )
  {
    if ( config.mode == Mode::parallel && config.workers == 0 )
      throw std::invalid_argument( "workers must be positive" );
    if ( config.mode == Mode::parallel )
      out.heuristic = extract_parallel( egraph, config.cost, { config.workers, config.batch_size, nullptr } );
    else
      out.heuristic = extract_greedy( egraph, config.cost );
    out.heuristic_seconds = since_start();
    out.result = out.heuristic->result;
    out.status = out.result.valid ? "heuristic" : "infeasible";
    out.total_seconds = since_start();
    return out;
  }

  ExactOptions options;
  options.time_limit = config.time_limit;
  options.on_incumbent = [&]( double, Cost cost ) { out.incumbents.emplace_back( since_start(), cost ); };

  if ( config.mode == Mode::hybrid )
  {
    run_heuristic( CostKind::dag );
    if ( !config.theta.is_infinite() )
    {
      out.mask = prune( egraph, out.heuristic->costs, config.theta );
      options.mask = &*out.mask;
    }
    if ( out.heuristic->result.valid )
      options.warm = &out.heuristic->result;
  }

  auto const solved = solve_exact( egraph, options );
  out.result = solved.result;
  out.status = std::string( to_string( solved.status ) );
  out.total_seconds = since_start();
  return out;
}

} // namespace egx
