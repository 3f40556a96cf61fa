#include <egx/prune.hpp>

#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace egx
{

std::vector<NodeId> PruneMask::retained( EGraph const& egraph, ClassId c ) const
{
  std::vector<NodeId> out;
  for ( auto n : egraph.members( c ) )
    if ( !pruned[n] )
      out.push_back( n );
  return out;
}

std::vector<NodeId> PruneMask::pruned_nodes() const
{
  std::vector<NodeId> out;
  for ( NodeId n = 0; n < pruned.size(); ++n )
    if ( pruned[n] )
      out.push_back( n );
  return out;
}

std::size_t PruneMask::num_pruned() const
{
  return static_cast<std::size_t>( std::count( pruned.begin(), pruned.end(), true ) );
}

PruneMask prune( EGraph const& egraph, ClassCosts const& costs, Rational const& theta )
{
  if ( theta < Rational( 1, 1 ) )
    throw std::invalid_argument( "threshold must be at least 1, got " + theta.to_display() );

  PruneMask mask;
  mask.theta = theta;
  mask.pruned.assign( egraph.num_nodes(), true );
  mask.dead.assign( egraph.num_classes(), false );

  for ( ClassId c = 0; c < egraph.num_classes(); ++c )
  {
    Cost lowest = Cost::infinity();
    for ( auto n : egraph.members( c ) )
      lowest = std::min( lowest, costs.node_best[n] );
    if ( lowest.is_infinite() )
    {
      mask.dead[c] = true;
      continue;
    }

    for ( auto n : egraph.members( c ) )
    {
      auto const cost = costs.node_best[n];
      if ( cost.is_infinite() )
        continue;
      // cost <= lowest * p / q, in integers
      bool keep = theta.is_infinite() || static_cast<unsigned __int128>( cost.value() ) * theta.den() <=
                                             static_cast<unsigned __int128>( lowest.value() ) * theta.num();
      mask.pruned[n] = !keep;
    }
  }
  return mask;
}

void write_prune_mask( EGraph const& egraph, PruneMask const& mask, std::ostream& out )
{
  nlohmann::ordered_json doc;
  doc["theta"] = mask.theta.to_string();
  auto& pruned = doc["pruned"] = nlohmann::ordered_json::array();
  for ( auto n : mask.pruned_nodes() )
    pruned.push_back( egraph.node_name( n ) );
  auto& dead = doc["dead"] = nlohmann::ordered_json::array();
  for ( ClassId c = 0; c < egraph.num_classes(); ++c )
    if ( mask.dead[c] )
      dead.push_back( egraph.class_name( c ) );
  out << doc.dump( 2 ) << '\n';
}

} // namespace egx
