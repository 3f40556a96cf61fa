#include <egx/bench.hpp>
#include <egx/io.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace egx
{

namespace
{

std::string trim( std::string_view s )
{
  auto const b = s.find_first_not_of( " \t" );
  if ( b == std::string_view::npos )
    return {};
  auto const e = s.find_last_not_of( " \t" );
  return std::string( s.substr( b, e - b + 1 ) );
}

unsigned parse_workers( std::string const& text, std::string_view item )
{
  if ( text.empty() || !std::all_of( text.begin(), text.end(), []( char ch ) { return ch >= '0' && ch <= '9'; } ) )
    throw std::invalid_argument( "bad worker count in '" + std::string( item ) + "'" );
  auto const n = std::stoul( text );
  if ( n == 0 || n > 4096 )
    throw std::invalid_argument( "worker count out of range in '" + std::string( item ) + "'" );
  return static_cast<unsigned>( n );
}

MethodConfig parse_method( std::string_view item )
{
  auto const text = trim( item );
  auto const open = text.find( '(' );
  auto const name = text.substr( 0, open );
  std::vector<std::string> args;
  if ( open != std::string::npos )
  {
    if ( text.back() != ')' )
      throw std::invalid_argument( "unbalanced parentheses in '" + text + "'" );
    auto const inner = text.substr( open + 1, text.size() - open - 2 );
    std::size_t from = 0;
    while ( true )
    {
      auto const comma = inner.find( ',', from );
      args.push_back( trim( inner.substr( from, comma - from ) ) );
      if ( comma == std::string::npos )
        break;
      from = comma + 1;
    }
  }

  MethodConfig m;
  m.mode = parse_mode( name );
  switch ( m.mode )
  {
  case Mode::greedy:
  case Mode::exact:
    if ( !args.empty() )
      throw std::invalid_argument( "'" + name + "' takes no arguments" );
    m.label = name;
    break;
  case Mode::parallel:
    if ( args.size() != 1 )
      throw std::invalid_argument( "parallel needs a worker count: parallel(N)" );
    m.workers = parse_workers( args[0], text );
    m.label = "parallel(" + std::to_string( m.workers ) + ")";
    break;
  case Mode::hybrid:
    if ( args.empty() || args.size() > 2 )
      throw std::invalid_argument( "hybrid needs a threshold: hybrid(THETA) or hybrid(THETA,N)" );
    m.theta = Rational::parse( args[0] );
    if ( args.size() == 2 )
      m.workers = parse_workers( args[1], text );
    m.label = "hybrid(" + m.theta->to_display() + ( m.workers > 1 ? "," + std::to_string( m.workers ) : "" ) + ")";
    break;
  }
  return m;
}

std::string cost_text( Cost c )
{
  return c.is_finite() ? std::to_string( c.value() ) : std::string( "inf" );
}

std::int64_t as_signed( std::uint64_t v )
{
  if ( v > static_cast<std::uint64_t>( std::numeric_limits<std::int64_t>::max() ) )
    throw std::overflow_error( "cost too large for gap computation" );
  return static_cast<std::int64_t>( v );
}

GapRecord run_one( std::string const& name, EGraph const& graph, Cost h, MethodConfig const& method,
                   SuiteOptions const& options )
{
  PipelineConfig config;
  config.mode = method.mode;
  config.workers = method.workers;
  config.time_limit = options.time_limit;
  if ( method.theta )
    config.theta = *method.theta;

  auto const outcome = run_pipeline( graph, config );
  GapRecord r;
  r.benchmark = name;
  r.method = method.label;
  r.theta = method.theta;
  r.workers = method.workers;
  r.wall_time = outcome.total_seconds;
  r.final_cost = outcome.result.valid ? outcome.result.dag_cost : Cost::infinity();
  r.h = h;
  r.status = outcome.status;
  r.incumbents = outcome.incumbents;
  return r;
}

std::vector<GapRecord> run_benchmark( std::filesystem::path const& file, std::vector<MethodConfig> const& methods,
                                      SuiteOptions const& options )
{
  auto graph = load_egraph_file( file );
  if ( options.dedup != DedupLevel::off )
    graph = deduplicate( graph, options.dedup == DedupLevel::aggressive ).graph;
  auto const name = file.stem().string();
  auto const h = extract_greedy( graph, CostKind::dag ).result;
  auto const h_cost = h.valid ? h.dag_cost : Cost::infinity();

  std::vector<GapRecord> out;
  for ( auto const& m : methods )
    out.push_back( run_one( name, graph, h_cost, m, options ) );
  return out;
}

} // namespace

std::vector<MethodConfig> parse_methods( std::string_view spec )
{
  std::vector<MethodConfig> out;
  std::size_t from = 0;
  int depth = 0;
  for ( std::size_t i = 0; i <= spec.size(); ++i )
  {
    if ( i < spec.size() && spec[i] == '(' )
      ++depth;
    else if ( i < spec.size() && spec[i] == ')' )
      --depth;
    else if ( i == spec.size() || ( spec[i] == '+' && depth == 0 ) )
    {
      auto const item = spec.substr( from, i - from );
      if ( trim( item ).empty() )
        throw std::invalid_argument( "empty method in spec '" + std::string( spec ) + "'" );
      out.push_back( parse_method( item ) );
      from = i + 1;
    }
    if ( depth < 0 )
      throw std::invalid_argument( "unbalanced parentheses in '" + std::string( spec ) + "'" );
  }
  if ( depth != 0 )
    throw std::invalid_argument( "unbalanced parentheses in '" + std::string( spec ) + "'" );
  return out;
}

std::string Gap::to_string() const
{
  return den == 1 ? std::to_string( num ) : std::to_string( num ) + "/" + std::to_string( den );
}

std::optional<Gap> normalized_gap( Cost final_cost, Cost h, Cost bks )
{
  if ( final_cost.is_infinite() || h.is_infinite() || bks.is_infinite() )
    return std::nullopt;
  auto num = as_signed( final_cost.value() ) - as_signed( bks.value() );
  auto den = as_signed( h.value() ) - as_signed( bks.value() );
  if ( den == 0 )
  {
    if ( num == 0 )
      return Gap{ 0, 1 };
    return std::nullopt;
  }
  if ( den < 0 )
  {
    num = -num;
    den = -den;
  }
  auto const g = std::gcd( num, den );
  return Gap{ num / g, den / g };
}

std::vector<GapRecord> run_suite( std::vector<std::filesystem::path> const& corpus,
                                  std::vector<MethodConfig> const& methods,
                                  std::map<std::string, std::uint64_t> const& bks,
                                  SuiteOptions const& options )
{
  if ( !( options.time_limit > 0 ) )
    throw std::invalid_argument( "time limit must be positive" );

  std::vector<std::vector<GapRecord>> per_file( corpus.size() );
  if ( options.jobs <= 1 || corpus.size() <= 1 )
  {
    for ( std::size_t i = 0; i < corpus.size(); ++i )
      per_file[i] = run_benchmark( corpus[i], methods, options );
  }
  else
  {
    std::atomic<std::size_t> next{ 0 };
    std::vector<std::exception_ptr> errors( corpus.size() );
    {
      std::vector<std::jthread> pool;
      for ( unsigned t = 0; t < std::min<std::size_t>( options.jobs, corpus.size() ); ++t )
        pool.emplace_back( [&] {
          for ( auto i = next++; i < corpus.size(); i = next++ )
          {
            try
            {
              per_file[i] = run_benchmark( corpus[i], methods, options );
            }
            catch ( ... )
            {
              errors[i] = std::current_exception();
            }
          }
        } );
    }
    for ( auto const& e : errors )
      if ( e )
        std::rethrow_exception( e );
  }

  std::vector<GapRecord> records;
  for ( auto& group : per_file )
  {
    if ( group.empty() )
      continue;
    Cost best = group.front().h;
    bool provisional = true;
    if ( auto const it = bks.find( group.front().benchmark ); it != bks.end() )
    {
      best = Cost( it->second );
      provisional = false;
    }
    else
      for ( auto const& r : group )
        best = std::min( best, r.final_cost );
    for ( auto& r : group )
    {
      r.bks = best;
      r.bks_provisional = provisional;
      r.alpha = normalized_gap( r.final_cost, r.h, r.bks );
      records.push_back( std::move( r ) );
    }
  }
  std::stable_sort( records.begin(), records.end(),
                    []( GapRecord const& a, GapRecord const& b ) { return a.benchmark < b.benchmark; } );
  return records;
}

std::vector<std::filesystem::path> list_corpus( std::filesystem::path const& dir )
{
  if ( !std::filesystem::is_directory( dir ) )
    throw std::runtime_error( "corpus directory not found: " + dir.string() );
  std::vector<std::filesystem::path> out;
  for ( auto const& entry : std::filesystem::directory_iterator( dir ) )
    if ( entry.is_regular_file() && entry.path().extension() == ".json" )
      out.push_back( entry.path() );
  std::sort( out.begin(), out.end() );
  return out;
}

std::map<std::string, std::uint64_t> load_bks( std::filesystem::path const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw std::runtime_error( "cannot open bks file " + path.string() );
  nlohmann::json j;
  try
  {
    in >> j;
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw parse_error( path.string() + ": " + e.what() );
  }
  if ( !j.is_object() )
    throw parse_error( path.string() + ": expected an object of name -> cost" );
  std::map<std::string, std::uint64_t> out;
  for ( auto const& [name, value] : j.items() )
  {
    if ( !value.is_number_unsigned() && !( value.is_number_integer() && value.get<std::int64_t>() >= 0 ) )
      throw parse_error( path.string() + ": cost of '" + name + "' is not a non-negative integer" );
    out[name] = value.get<std::uint64_t>();
  }
  return out;
}

void write_csv( std::vector<GapRecord> const& records, std::ostream& out )
{
  out << "benchmark,method,theta,workers,wall_time_s,cost,H,BKS,alpha,status\n";
  for ( auto const& r : records )
  {
    char wall[32];
    std::snprintf( wall, sizeof wall, "%.6f", r.wall_time );
    out << r.benchmark << ',' << '"' << r.method << '"' << ',' << ( r.theta ? r.theta->to_display() : "" ) << ','
        << r.workers << ',' << wall << ',' << cost_text( r.final_cost ) << ',' << cost_text( r.h ) << ','
        << cost_text( r.bks ) << ',' << ( r.alpha ? r.alpha->to_string() : "" ) << ',' << r.status
        << ( r.bks_provisional ? "/provisional-bks" : "" ) << '\n';
  }
}

void write_curves( std::vector<GapRecord> const& records, std::ostream& out )
{
  static constexpr std::pair<std::int64_t, std::int64_t> targets[] = { { 1, 1 }, { 1, 2 }, { 1, 4 },
                                                                       { 1, 10 }, { 1, 20 }, { 0, 1 } };
  out << "benchmark,method,alpha_target,time_s\n";
  for ( auto const& r : records )
    for ( auto const& [tn, td] : targets )
      for ( auto const& [t, cost] : r.incumbents )
      {
        auto const a = normalized_gap( cost, r.h, r.bks );
        // a <= tn/td, cross-multiplied with positive denominators
        if ( a && static_cast<__int128>( a->num ) * td <= static_cast<__int128>( tn ) * a->den )
        {
          char time[32];
          std::snprintf( time, sizeof time, "%.6f", t );
          out << r.benchmark << ',' << '"' << r.method << '"' << ',' << Gap{ tn, td }.to_string() << ',' << time << '\n';
          break;
        }
      }
}

} // namespace egx
