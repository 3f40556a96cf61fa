#include <egx/egraph.hpp>

#include <algorithm>
#include <map>
#include <numeric>

namespace egx
{

std::optional<NodeId> EGraph::find_node( std::string_view name ) const
{
  if ( auto it = node_index_.find( std::string( name ) ); it != node_index_.end() )
    return it->second;
  return std::nullopt;
}

std::optional<ClassId> EGraph::find_class( std::string_view name ) const
{
  if ( auto it = class_index_.find( std::string( name ) ); it != class_index_.end() )
    return it->second;
  return std::nullopt;
}

NodeId EGraph::node( std::string_view name ) const
{
  if ( auto n = find_node( name ) )
    return *n;
  throw std::out_of_range( "unknown node '" + std::string( name ) + "'" );
}

ClassId EGraph::eclass( std::string_view name ) const
{
  if ( auto c = find_class( name ) )
    return *c;
  throw std::out_of_range( "unknown e-class '" + std::string( name ) + "'" );
}

ClassId EGraphBuilder::add_class( std::string_view name )
{
  auto [it, inserted] = class_index_.try_emplace( std::string( name ), static_cast<ClassId>( class_names_.size() ) );
  if ( inserted )
    class_names_.emplace_back( name );
  return it->second;
}

NodeId EGraphBuilder::add_node( std::string_view name, std::string_view op, ClassId eclass,
                                std::vector<ClassId> children, Cost::value_type cost )
{
  auto const id = static_cast<NodeId>( nodes_.size() );
  if ( !node_index_.try_emplace( std::string( name ), id ).second )
    throw invalid_egraph( "duplicate node id '" + std::string( name ) + "'" );
  if ( eclass >= class_names_.size() )
    throw invalid_egraph( "node '" + std::string( name ) + "' refers to an unknown e-class" );
  for ( auto c : children )
    if ( c >= class_names_.size() )
      throw invalid_egraph( "node '" + std::string( name ) + "' has a dangling child reference" );
  if ( cost == std::numeric_limits<Cost::value_type>::max() )
    throw invalid_egraph( "node '" + std::string( name ) + "' has a non-finite cost" );
  nodes_.push_back( { std::string( name ), std::string( op ), eclass, std::move( children ), cost } );
  return id;
}

void EGraphBuilder::add_root( ClassId c )
{
  if ( c >= class_names_.size() )
    throw invalid_egraph( "root refers to an unknown e-class" );
  if ( std::find( roots_.begin(), roots_.end(), c ) == roots_.end() )
    roots_.push_back( c );
}

EGraph EGraphBuilder::build() &&
{
  if ( roots_.empty() )
    throw invalid_egraph( "e-graph has no root e-classes" );

  auto const num_nodes = nodes_.size();
  auto const num_classes = class_names_.size();

  EGraph g;
  g.node_names_.reserve( num_nodes );
  g.ops_.reserve( num_nodes );
  g.node_class_.reserve( num_nodes );
  g.costs_.reserve( num_nodes );
  g.self_cyclic_.reserve( num_nodes );
  g.child_offsets_.reserve( num_nodes + 1 );
  g.unique_offsets_.reserve( num_nodes + 1 );
  g.child_offsets_.push_back( 0 );
  g.unique_offsets_.push_back( 0 );

  std::vector<std::uint32_t> member_count( num_classes, 0 );
  std::vector<std::uint32_t> parent_count( num_classes, 0 );
  std::vector<ClassId> scratch;

  for ( auto& n : nodes_ )
  {
    g.node_names_.push_back( std::move( n.name ) );
    g.ops_.push_back( std::move( n.op ) );
    g.node_class_.push_back( n.eclass );
    g.costs_.push_back( n.cost );
    ++member_count[n.eclass];

    g.children_.insert( g.children_.end(), n.children.begin(), n.children.end() );
    g.child_offsets_.push_back( static_cast<std::uint32_t>( g.children_.size() ) );

    scratch.assign( n.children.begin(), n.children.end() );
    std::sort( scratch.begin(), scratch.end() );
    scratch.erase( std::unique( scratch.begin(), scratch.end() ), scratch.end() );
    g.unique_children_.insert( g.unique_children_.end(), scratch.begin(), scratch.end() );
    g.unique_offsets_.push_back( static_cast<std::uint32_t>( g.unique_children_.size() ) );
    for ( auto c : scratch )
      ++parent_count[c];

    g.self_cyclic_.push_back( std::binary_search( scratch.begin(), scratch.end(), n.eclass ) ? 1 : 0 );
  }

  for ( ClassId c = 0; c < num_classes; ++c )
    if ( member_count[c] == 0 )
      throw invalid_egraph( "e-class '" + class_names_[c] + "' has no member nodes" );

  g.member_offsets_.assign( num_classes + 1, 0 );
  g.parent_offsets_.assign( num_classes + 1, 0 );
  for ( ClassId c = 0; c < num_classes; ++c )
  {
    g.member_offsets_[c + 1] = g.member_offsets_[c] + member_count[c];
    g.parent_offsets_[c + 1] = g.parent_offsets_[c] + parent_count[c];
  }
  g.members_.resize( num_nodes );
  g.parents_.resize( g.parent_offsets_.back() );

  // filled in ascending node order, so both lists come out sorted
  std::vector<std::uint32_t> member_fill( g.member_offsets_.begin(), g.member_offsets_.end() - 1 );
  std::vector<std::uint32_t> parent_fill( g.parent_offsets_.begin(), g.parent_offsets_.end() - 1 );
  for ( NodeId n = 0; n < num_nodes; ++n )
  {
    g.members_[member_fill[g.node_class_[n]]++] = n;
    for ( auto c : g.child_classes( n ) )
      g.parents_[parent_fill[c]++] = n;
  }

  g.class_names_ = std::move( class_names_ );
  g.roots_ = std::move( roots_ );
  g.node_index_ = std::move( node_index_ );
  g.class_index_ = std::move( class_index_ );
  return g;
}

DedupResult deduplicate( const EGraph& egraph, bool aggressive )
{
  // key -> kept node, per class
  using Key = std::pair<std::string_view, std::vector<ClassId>>;
  std::vector<NodeId> keep_for( egraph.num_nodes(), kNoNode );
  std::vector<bool> kept( egraph.num_nodes(), false );

  for ( ClassId c = 0; c < egraph.num_classes(); ++c )
  {
    std::map<Key, NodeId> best;
    for ( auto n : egraph.members( c ) )
    {
      auto child_set = egraph.child_classes( n );
      Key key{ aggressive ? std::string_view{} : egraph.op( n ), { child_set.begin(), child_set.end() } };
      auto [it, inserted] = best.try_emplace( std::move( key ), n );
      if ( !inserted && egraph.node_cost( n ) < egraph.node_cost( it->second ) )
        it->second = n;
    }
    for ( auto const& [key, n] : best )
      kept[n] = true;
  }

  EGraphBuilder builder;
  for ( ClassId c = 0; c < egraph.num_classes(); ++c )
    builder.add_class( egraph.class_name( c ) );

  DedupResult result;
  for ( NodeId n = 0; n < egraph.num_nodes(); ++n )
  {
    if ( !kept[n] )
    {
      result.removed.emplace_back( egraph.node_name( n ) );
      continue;
    }
    auto ch = egraph.children( n );
    builder.add_node( egraph.node_name( n ), egraph.op( n ), egraph.class_of( n ), { ch.begin(), ch.end() },
                      egraph.node_cost( n ).value() );
  }
  for ( auto r : egraph.roots() )
    builder.add_root( r );
  result.graph = std::move( builder ).build();
  return result;
}

} // namespace egx
