#include <egx/extraction.hpp>

#include <algorithm>
#include <sstream>

namespace egx
{

namespace
{

enum class Mark : std::uint8_t
{
  unseen,
  open,
  done
};

/// Iterative DFS over chosen nodes; returns a cycle (as a class list) if one
/// is reachable from `roots`, and collects reachable classes in post-order.
std::vector<ClassId> find_cycle( EGraph const& egraph, Choices const& choices, std::span<const ClassId> roots,
                                 std::vector<ClassId>* post_order )
{
  std::vector<Mark> mark( egraph.num_classes(), Mark::unseen );
  std::vector<std::pair<ClassId, std::uint32_t>> stack;

  for ( auto root : roots )
  {
    if ( mark[root] != Mark::unseen || choices[root] == kNoNode )
      continue;
    stack.emplace_back( root, 0 );
    mark[root] = Mark::open;
    while ( !stack.empty() )
    {
      auto& [c, next] = stack.back();
      auto kids = egraph.child_classes( choices[c] );
      if ( next == kids.size() )
      {
        mark[c] = Mark::done;
        if ( post_order )
          post_order->push_back( c );
        stack.pop_back();
        continue;
      }
      auto const k = kids[next++];
      if ( choices[k] == kNoNode || mark[k] == Mark::done )
        continue;
      if ( mark[k] == Mark::open )
      {
        std::vector<ClassId> cycle;
        auto it = std::find_if( stack.begin(), stack.end(), [k]( auto const& e ) { return e.first == k; } );
        for ( ; it != stack.end(); ++it )
          cycle.push_back( it->first );
        return cycle;
      }
      mark[k] = Mark::open;
      stack.emplace_back( k, 0 );
    }
  }
  return {};
}

} // namespace

std::string ValidityReport::describe( EGraph const& egraph ) const
{
  if ( valid() )
    return "valid";
  std::ostringstream os;
  if ( !roots_covered || !children_covered )
  {
    os << "missing choice for e-class";
    for ( auto c : missing )
      os << " '" << egraph.class_name( c ) << "'";
  }
  if ( !acyclic )
  {
    if ( !roots_covered || !children_covered )
      os << "; ";
    os << "selection cycle through";
    for ( auto c : cycle )
      os << " '" << egraph.class_name( c ) << "'";
  }
  return os.str();
}

ValidityReport validate_extraction( EGraph const& egraph, Choices const& choices )
{
  ValidityReport report;
  if ( choices.size() != egraph.num_classes() )
  {
    report.roots_covered = false;
    report.missing.assign( egraph.roots().begin(), egraph.roots().end() );
    return report;
  }

  for ( auto r : egraph.roots() )
    if ( choices[r] == kNoNode )
    {
      report.roots_covered = false;
      report.missing.push_back( r );
    }

  for ( ClassId c = 0; c < egraph.num_classes(); ++c )
  {
    auto const n = choices[c];
    if ( n == kNoNode )
      continue;
    if ( n >= egraph.num_nodes() || egraph.class_of( n ) != c )
      throw invalid_extraction( "choice for e-class '" + std::string( egraph.class_name( c ) ) +
                                "' is not one of its members" );
    for ( auto k : egraph.child_classes( n ) )
      if ( choices[k] == kNoNode )
      {
        report.children_covered = false;
        if ( std::find( report.missing.begin(), report.missing.end(), k ) == report.missing.end() )
          report.missing.push_back( k );
      }
  }

  report.cycle = find_cycle( egraph, choices, egraph.roots(), nullptr );
  report.acyclic = report.cycle.empty();
  return report;
}

Cost evaluate_dag_cost( EGraph const& egraph, Choices const& choices )
{
  return evaluate_dag_cost( egraph, choices, egraph.roots() );
}

Cost evaluate_dag_cost( EGraph const& egraph, Choices const& choices, std::span<const ClassId> roots )
{
  auto const report = validate_extraction( egraph, choices );
  if ( !report.valid() )
    throw invalid_extraction( report.describe( egraph ) );

  std::vector<ClassId> reachable;
  find_cycle( egraph, choices, roots, &reachable );
  Cost total = Cost::zero();
  for ( auto c : reachable )
    total += egraph.node_cost( choices[c] );
  return total;
}

Cost evaluate_tree_cost( EGraph const& egraph, Choices const& choices )
{
  auto const report = validate_extraction( egraph, choices );
  if ( !report.valid() )
    throw invalid_extraction( report.describe( egraph ) );

  std::vector<ClassId> order;
  find_cycle( egraph, choices, egraph.roots(), &order );
  std::vector<Cost> cost( egraph.num_classes(), Cost::zero() );
  for ( auto c : order ) // post-order: children first
  {
    auto const n = choices[c];
    Cost v = egraph.node_cost( n );
    for ( auto k : egraph.children( n ) )
      v += cost[k];
    cost[c] = v;
  }
  Cost total = Cost::zero();
  for ( auto r : egraph.roots() )
    total += cost[r];
  return total;
}

Cost evaluate_depth_cost( EGraph const& egraph, Choices const& choices )
{
  auto const report = validate_extraction( egraph, choices );
  if ( !report.valid() )
    throw invalid_extraction( report.describe( egraph ) );

  std::vector<ClassId> order;
  find_cycle( egraph, choices, egraph.roots(), &order );
  std::vector<Cost> cost( egraph.num_classes(), Cost::zero() );
  for ( auto c : order )
  {
    auto const n = choices[c];
    Cost deepest = Cost::zero();
    for ( auto k : egraph.child_classes( n ) )
      deepest = max_of( deepest, cost[k] );
    cost[c] = egraph.node_cost( n ) + deepest;
  }
  Cost total = Cost::zero();
  for ( auto r : egraph.roots() )
    total = max_of( total, cost[r] );
  return total;
}

Choices restrict_to_reachable( EGraph const& egraph, Choices const& choices )
{
  Choices out( egraph.num_classes(), kNoNode );
  if ( choices.size() != egraph.num_classes() )
    return out;
  std::vector<ClassId> stack;
  for ( auto r : egraph.roots() )
    if ( choices[r] != kNoNode && out[r] == kNoNode )
    {
      out[r] = choices[r];
      stack.push_back( r );
    }
  while ( !stack.empty() )
  {
    auto const c = stack.back();
    stack.pop_back();
    for ( auto k : egraph.child_classes( choices[c] ) )
      if ( choices[k] != kNoNode && out[k] == kNoNode )
      {
        out[k] = choices[k];
        stack.push_back( k );
      }
  }
  return out;
}

ExtractionResult make_result( EGraph const& egraph, Choices choices )
{
  ExtractionResult result;
  result.choices = std::move( choices );
  result.valid = validate_extraction( egraph, result.choices ).valid();
  if ( result.valid )
    result.dag_cost = evaluate_dag_cost( egraph, result.choices );
  return result;
}

} // namespace egx
