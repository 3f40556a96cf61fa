#include "greedy_detail.hpp"

#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace egx
{

CostKind parse_cost_kind( std::string_view text )
{
  if ( text == "dag" )
    return CostKind::dag;
  if ( text == "tree" )
    return CostKind::tree;
  if ( text == "depth" )
    return CostKind::depth;
  throw std::invalid_argument( "unknown cost kind '" + std::string( text ) + "'" );
}

std::string_view to_string( CostKind kind )
{
  switch ( kind )
  {
  case CostKind::dag:
    return "dag";
  case CostKind::tree:
    return "tree";
  case CostKind::depth:
    return "depth";
  }
  return "?";
}

ClassCosts::ClassCosts( EGraph const& egraph, CostKind kind )
    : kind( kind ),
      best_node( egraph.num_classes(), kNoNode ),
      best_total( egraph.num_classes(), Cost::infinity() ),
      node_best( egraph.num_nodes(), Cost::infinity() )
{
  if ( egraph.has_compact_class_index() )
    supports = std::vector<detail::Support<std::uint16_t>>( egraph.num_classes() );
  else
    supports = std::vector<detail::Support<std::uint32_t>>( egraph.num_classes() );
}

CostSet ClassCosts::best( ClassId c ) const
{
  if ( !has_best( c ) )
    throw std::out_of_range( "e-class has no finite selection" );
  CostSet out;
  out.total = best_total[c];
  out.for_node = best_node[c];
  std::visit(
      [&]( auto const& table ) {
        auto const& s = table[c];
        out.chosen.reserve( s.size() );
        for ( std::size_t i = 0; i < s.size(); ++i )
          out.chosen.emplace_back( static_cast<ClassId>( s.classes[i] ), s.nodes[i] );
      },
      supports );
  return out;
}

CostSet calculate_cost_set( EGraph const& egraph, NodeId node, ClassCosts const& costs )
{
  if ( !detail::is_ready( egraph, costs, node ) )
    throw std::invalid_argument( "node '" + std::string( egraph.node_name( node ) ) +
                                 "' has a child e-class without a selection" );
  CostSet out;
  out.for_node = node;
  std::visit(
      [&]( auto const& table ) {
        using Index = typename std::decay_t<decltype( table )>::value_type::index_type;
        auto cand = detail::compute_candidate<Index>( egraph, costs, node );
        out.total = cand.total;
        if ( cand.total.is_infinite() )
          return;
        for ( std::size_t i = 0; i < cand.support.size(); ++i )
          out.chosen.emplace_back( static_cast<ClassId>( cand.support.classes[i] ), cand.support.nodes[i] );
      },
      costs.supports );
  return out;
}

namespace detail
{

Schedule build_schedule( EGraph const& egraph )
{
  auto const num_classes = static_cast<std::uint32_t>( egraph.num_classes() );
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();

  // class -> child classes through selectable members
  std::vector<std::uint32_t> offsets( num_classes + 1, 0 );
  std::vector<ClassId> edges;
  for ( ClassId c = 0; c < num_classes; ++c )
  {
    auto const begin = edges.size();
    for ( auto n : egraph.members( c ) )
      if ( !egraph.is_self_cyclic( n ) )
        for ( auto k : egraph.child_classes( n ) )
          edges.push_back( k );
    std::sort( edges.begin() + begin, edges.end() );
    edges.erase( std::unique( edges.begin() + begin, edges.end() ), edges.end() );
    offsets[c + 1] = static_cast<std::uint32_t>( edges.size() );
  }

  // iterative Tarjan; components come out children first
  Schedule sched;
  sched.component.assign( num_classes, kUnvisited );
  std::vector<std::uint32_t> index( num_classes, kUnvisited ), low( num_classes, 0 );
  std::vector<std::uint8_t> on_stack( num_classes, 0 );
  std::vector<ClassId> tarjan_stack;
  std::vector<std::pair<ClassId, std::uint32_t>> call_stack;
  std::vector<std::vector<ClassId>> components;
  std::uint32_t counter = 0;

  for ( ClassId start = 0; start < num_classes; ++start )
  {
    if ( index[start] != kUnvisited )
      continue;
    call_stack.emplace_back( start, offsets[start] );
    index[start] = low[start] = counter++;
    tarjan_stack.push_back( start );
    on_stack[start] = 1;

    while ( !call_stack.empty() )
    {
      auto& [c, next] = call_stack.back();
      if ( next < offsets[c + 1] )
      {
        auto const k = edges[next++];
        if ( index[k] == kUnvisited )
        {
          index[k] = low[k] = counter++;
          tarjan_stack.push_back( k );
          on_stack[k] = 1;
          call_stack.emplace_back( k, offsets[k] );
        }
        else if ( on_stack[k] )
          low[c] = std::min( low[c], index[k] );
        continue;
      }

      auto const done = c;
      call_stack.pop_back();
      if ( !call_stack.empty() )
      {
        auto const parent = call_stack.back().first;
        low[parent] = std::min( low[parent], low[done] );
      }
      if ( low[done] == index[done] )
      {
        auto const id = static_cast<std::uint32_t>( components.size() );
        auto& members = components.emplace_back();
        ClassId k;
        do
        {
          k = tarjan_stack.back();
          tarjan_stack.pop_back();
          on_stack[k] = 0;
          sched.component[k] = id;
          members.push_back( k );
        } while ( k != done );
        std::sort( members.begin(), members.end() );
      }
    }
  }

  std::vector<std::uint32_t> level( components.size(), 0 );
  std::uint32_t max_level = 0;
  for ( std::uint32_t id = 0; id < components.size(); ++id )
  {
    for ( auto c : components[id] )
      for ( auto e = offsets[c]; e < offsets[c + 1]; ++e )
        if ( auto const other = sched.component[edges[e]]; other != id )
          level[id] = std::max( level[id], level[other] + 1 );
    max_level = std::max( max_level, level[id] );
  }

  sched.levels.resize( components.empty() ? 0 : max_level + 1 );
  std::vector<std::uint32_t> order( components.size() );
  std::iota( order.begin(), order.end(), 0 );
  std::sort( order.begin(), order.end(),
             [&]( auto a, auto b ) { return components[a].front() < components[b].front(); } );
  for ( auto id : order )
  {
    auto& lvl = sched.levels[level[id]];
    if ( components[id].size() == 1 )
    {
      for ( auto n : egraph.members( components[id].front() ) )
        if ( !egraph.is_self_cyclic( n ) )
          lvl.acyclic.push_back( n );
      continue;
    }
    auto& nodes = lvl.cyclic.emplace_back();
    for ( auto c : components[id] )
      for ( auto n : egraph.members( c ) )
        if ( !egraph.is_self_cyclic( n ) )
          nodes.push_back( n );
    std::sort( nodes.begin(), nodes.end() );
  }
  for ( auto& lvl : sched.levels )
    std::sort( lvl.acyclic.begin(), lvl.acyclic.end() );
  return sched;
}

namespace
{

template<class ClassIndex>
void run_sequential( EGraph const& egraph, ClassCosts& costs, std::vector<UpdateEvent>* trace )
{
  auto const sched = build_schedule( egraph );
  std::vector<std::uint8_t> queued( egraph.num_nodes(), 0 );
  std::deque<NodeId> pending;

  for ( auto const& level : sched.levels )
  {
    for ( auto n : level.acyclic )
      if ( is_ready( egraph, costs, n ) )
        apply_candidate( egraph, costs, compute_candidate<ClassIndex>( egraph, costs, n ), trace );

    for ( auto const& component : level.cyclic )
    {
      for ( auto n : component )
      {
        pending.push_back( n );
        queued[n] = 1;
      }
      while ( !pending.empty() )
      {
        auto const n = pending.front();
        pending.pop_front();
        queued[n] = 0;
        if ( !is_ready( egraph, costs, n ) )
          continue;
        auto const c = egraph.class_of( n );
        if ( !apply_candidate( egraph, costs, compute_candidate<ClassIndex>( egraph, costs, n ), trace ) )
          continue;
        for ( auto p : egraph.parents( c ) )
          if ( !queued[p] && !egraph.is_self_cyclic( p ) &&
               sched.component[egraph.class_of( p )] == sched.component[c] )
          {
            pending.push_back( p );
            queued[p] = 1;
          }
      }
    }
  }
}

} // namespace

} // namespace detail

GreedyOutcome extract_greedy( EGraph const& egraph, CostKind kind, std::vector<UpdateEvent>* trace )
{
  GreedyOutcome out;
  out.costs = ClassCosts( egraph, kind );
  if ( egraph.has_compact_class_index() )
    detail::run_sequential<std::uint16_t>( egraph, out.costs, trace );
  else
    detail::run_sequential<std::uint32_t>( egraph, out.costs, trace );
  out.result = choices_from_costs( egraph, out.costs );
  return out;
}

ExtractionResult choices_from_costs( EGraph const& egraph, ClassCosts const& costs )
{
  for ( auto r : egraph.roots() )
    if ( !costs.has_best( r ) )
    {
      ExtractionResult infeasible;
      infeasible.choices.assign( egraph.num_classes(), kNoNode );
      return infeasible;
    }

  auto per_class = [&] { return make_result( egraph, restrict_to_reachable( egraph, costs.best_node ) ); };
  if ( costs.kind != CostKind::dag )
    return per_class();

  // the roots' cost sets, first root wins on a shared class
  Choices merged( egraph.num_classes(), kNoNode );
  for ( auto r : egraph.roots() )
    for ( auto const& [c, n] : costs.best( r ).chosen )
      if ( merged[c] == kNoNode )
        merged[c] = n;
  auto result = make_result( egraph, restrict_to_reachable( egraph, merged ) );
  if ( result.valid )
    return result;
  auto fallback = per_class();
  return fallback.valid ? fallback : result;
}

} // namespace egx
