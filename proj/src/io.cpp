#include <egx/io.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace egx
{

namespace
{

using ordered_json = nlohmann::ordered_json;

Cost::value_type convert_cost( ordered_json const& value, std::string const& node, CostScaling const& scaling )
{
  if ( !value.is_number() )
    throw parse_error( "node '" + node + "': cost is not a number" );

  if ( value.is_number_unsigned() || value.is_number_integer() )
  {
    auto const v = value.get<std::int64_t>();
    if ( v < 0 )
      throw invalid_egraph( "node '" + node + "': negative cost" );
    auto const scaled = static_cast<__int128>( v ) * scaling.multiplier;
    if ( scaled >= static_cast<__int128>( std::numeric_limits<Cost::value_type>::max() ) )
      throw invalid_egraph( "node '" + node + "': cost too large" );
    return static_cast<Cost::value_type>( scaled );
  }

  auto const raw = value.get<double>();
  if ( !std::isfinite( raw ) )
    throw invalid_egraph( "node '" + node + "': non-finite cost" );
  if ( raw < 0 )
    throw invalid_egraph( "node '" + node + "': negative cost" );

  double const scaled = raw * static_cast<double>( scaling.multiplier );
  double rounded = 0;
  switch ( scaling.rounding )
  {
  case CostScaling::Rounding::exact:
    rounded = std::round( scaled );
    if ( std::abs( scaled - rounded ) > 1e-9 * std::max( 1.0, std::abs( scaled ) ) )
      throw invalid_egraph( "node '" + node + "': cost " + value.dump() +
                            " is not an integer (enable cost scaling with rounding)" );
    break;
  case CostScaling::Rounding::nearest:
    rounded = std::round( scaled );
    break;
  case CostScaling::Rounding::up:
    rounded = std::ceil( scaled - 1e-9 );
    break;
  case CostScaling::Rounding::down:
    rounded = std::floor( scaled + 1e-9 );
    break;
  }
  if ( rounded >= 9.0e18 )
    throw invalid_egraph( "node '" + node + "': cost too large" );
  return static_cast<Cost::value_type>( rounded );
}

} // namespace

EGraph load_egraph( std::istream& in, CostScaling const& scaling )
{
  if ( scaling.multiplier <= 0 )
    throw std::invalid_argument( "cost scaling multiplier must be positive" );

  ordered_json doc;
  try
  {
    doc = ordered_json::parse( in );
  }
  catch ( nlohmann::json::parse_error const& e )
  {
    throw parse_error( std::string( "malformed JSON: " ) + e.what() );
  }

  if ( !doc.is_object() || !doc.contains( "nodes" ) || !doc["nodes"].is_object() )
    throw parse_error( "missing \"nodes\" object" );
  if ( !doc.contains( "root_eclasses" ) || !doc["root_eclasses"].is_array() )
    throw parse_error( "missing \"root_eclasses\" array" );

  auto const& nodes = doc["nodes"];
  EGraphBuilder builder;

  // first pass: classes in order of first appearance, and node -> class
  std::unordered_map<std::string, ClassId> class_of_node;
  for ( auto const& [id, node] : nodes.items() )
  {
    if ( !node.is_object() || !node.contains( "eclass" ) || !node["eclass"].is_string() )
      throw parse_error( "node '" + id + "': missing string \"eclass\"" );
    class_of_node.emplace( id, builder.add_class( node["eclass"].get<std::string>() ) );
  }

  for ( auto const& [id, node] : nodes.items() )
  {
    std::string op;
    if ( node.contains( "op" ) )
    {
      if ( !node["op"].is_string() )
        throw parse_error( "node '" + id + "': \"op\" is not a string" );
      op = node["op"].get<std::string>();
    }

    std::vector<ClassId> children;
    if ( node.contains( "children" ) )
    {
      if ( !node["children"].is_array() )
        throw parse_error( "node '" + id + "': \"children\" is not an array" );
      for ( auto const& child : node["children"] )
      {
        if ( !child.is_string() )
          throw parse_error( "node '" + id + "': child reference is not a string" );
        auto it = class_of_node.find( child.get<std::string>() );
        if ( it == class_of_node.end() )
          throw invalid_egraph( "node '" + id + "': dangling child reference '" + child.get<std::string>() + "'" );
        children.push_back( it->second );
      }
    }

    if ( !node.contains( "cost" ) )
      throw parse_error( "node '" + id + "': missing \"cost\"" );
    auto const cost = convert_cost( node["cost"], id, scaling );
    builder.add_node( id, op, class_of_node.at( id ), std::move( children ), cost );
  }

  auto const num_classes = builder.num_classes();
  for ( auto const& root : doc["root_eclasses"] )
  {
    if ( !root.is_string() )
      throw parse_error( "root e-class id is not a string" );
    auto const name = root.get<std::string>();
    auto const c = builder.add_class( name );
    if ( builder.num_classes() != num_classes )
      throw invalid_egraph( "dangling root e-class '" + name + "'" );
    builder.add_root( c );
  }

  return std::move( builder ).build();
}

EGraph load_egraph_file( std::filesystem::path const& path, CostScaling const& scaling )
{
  std::ifstream in( path );
  if ( !in )
    throw std::runtime_error( "cannot open '" + path.string() + "'" );
  return load_egraph( in, scaling );
}

void store_egraph( EGraph const& egraph, std::ostream& out )
{
  ordered_json doc;
  auto& nodes = doc["nodes"] = ordered_json::object();
  for ( NodeId n = 0; n < egraph.num_nodes(); ++n )
  {
    ordered_json node;
    node["op"] = egraph.op( n );
    auto& children = node["children"] = ordered_json::array();
    for ( auto c : egraph.children( n ) )
      children.push_back( egraph.node_name( egraph.members( c ).front() ) );
    node["eclass"] = egraph.class_name( egraph.class_of( n ) );
    node["cost"] = egraph.node_cost( n ).value();
    nodes[std::string( egraph.node_name( n ) )] = std::move( node );
  }
  auto& roots = doc["root_eclasses"] = ordered_json::array();
  for ( auto r : egraph.roots() )
    roots.push_back( egraph.class_name( r ) );
  out << doc.dump( 2 ) << '\n';
}

void write_extraction( EGraph const& egraph, ExtractionResult const& result, std::ostream& out )
{
  ordered_json doc;
  auto& choices = doc["choices"] = ordered_json::object();
  for ( ClassId c = 0; c < result.choices.size(); ++c )
    if ( result.choices[c] != kNoNode )
      choices[std::string( egraph.class_name( c ) )] = egraph.node_name( result.choices[c] );
  if ( result.valid && result.dag_cost.is_finite() )
    doc["dag_cost"] = result.dag_cost.value();
  else
    doc["dag_cost"] = nullptr;
  doc["valid"] = result.valid;
  out << doc.dump( 2 ) << '\n';
}

} // namespace egx
