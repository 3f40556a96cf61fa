#pragma once

// Shared machinery of the sequential and the OpenMP extractors.

#include <egx/greedy.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

namespace egx::detail
{

/// Bottom-up evaluation order over the class dependency graph.
///
/// Level k holds the components whose child components all sit below k.
/// Acyclic (single-class) components only need one pass over their nodes;
/// cyclic ones run a worklist.
struct Schedule
{
  struct Level
  {
    std::vector<NodeId> acyclic;
    std::vector<std::vector<NodeId>> cyclic;
  };

  std::vector<Level> levels;
  std::vector<std::uint32_t> component; ///< class -> component index
};

Schedule build_schedule( EGraph const& egraph );

template<class ClassIndex>
struct Candidate
{
  NodeId node = kNoNode;
  Cost total = Cost::infinity();
  Support<ClassIndex> support;
};

template<class ClassIndex>
std::vector<Support<ClassIndex>>& supports_of( ClassCosts& costs )
{
  return std::get<std::vector<Support<ClassIndex>>>( costs.supports );
}

template<class ClassIndex>
std::vector<Support<ClassIndex>> const& supports_of( ClassCosts const& costs )
{
  return std::get<std::vector<Support<ClassIndex>>>( costs.supports );
}

inline bool is_ready( EGraph const& egraph, ClassCosts const& costs, NodeId n )
{
  for ( auto k : egraph.child_classes( n ) )
    if ( costs.best_node[k] == kNoNode )
      return false;
  return true;
}

/// out = a ∪ b; on a shared class the entry of `a` wins.
template<class ClassIndex>
void merge_supports( Support<ClassIndex> const& a, Support<ClassIndex> const& b, Support<ClassIndex>& out )
{
  out.clear();
  out.classes.reserve( a.size() + b.size() );
  out.nodes.reserve( a.size() + b.size() );
  std::size_t i = 0, j = 0;
  while ( i < a.size() && j < b.size() )
  {
    if ( a.classes[i] < b.classes[j] )
    {
      out.classes.push_back( a.classes[i] );
      out.nodes.push_back( a.nodes[i++] );
    }
    else if ( b.classes[j] < a.classes[i] )
    {
      out.classes.push_back( b.classes[j] );
      out.nodes.push_back( b.nodes[j++] );
    }
    else
    {
      out.classes.push_back( a.classes[i] );
      out.nodes.push_back( a.nodes[i++] );
      ++j;
    }
  }
  out.classes.insert( out.classes.end(), a.classes.begin() + i, a.classes.end() );
  out.nodes.insert( out.nodes.end(), a.nodes.begin() + i, a.nodes.end() );
  out.classes.insert( out.classes.end(), b.classes.begin() + j, b.classes.end() );
  out.nodes.insert( out.nodes.end(), b.nodes.begin() + j, b.nodes.end() );
}

/// Cost set of a ready node against the current class bests.
template<class ClassIndex>
Candidate<ClassIndex> compute_candidate( EGraph const& egraph, ClassCosts const& costs, NodeId n )
{
  Candidate<ClassIndex> cand;
  cand.node = n;
  auto const own = egraph.class_of( n );

  switch ( costs.kind )
  {
  case CostKind::tree:
  {
    Cost total = egraph.node_cost( n );
    for ( auto k : egraph.children( n ) )
      total += costs.best_total[k];
    cand.total = total;
    cand.support.classes.push_back( static_cast<ClassIndex>( own ) );
    cand.support.nodes.push_back( n );
    return cand;
  }
  case CostKind::depth:
  {
    Cost deepest = Cost::zero();
    for ( auto k : egraph.child_classes( n ) )
      deepest = max_of( deepest, costs.best_total[k] );
    cand.total = egraph.node_cost( n ) + deepest;
    cand.support.classes.push_back( static_cast<ClassIndex>( own ) );
    cand.support.nodes.push_back( n );
    return cand;
  }
  case CostKind::dag:
    break;
  }

  auto const& table = supports_of<ClassIndex>( costs );
  auto kids = egraph.child_classes( n );
  Support<ClassIndex> merged;
  if ( !kids.empty() )
  {
    merged = table[kids[0]];
    Support<ClassIndex> scratch;
    for ( std::size_t i = 1; i < kids.size(); ++i )
    {
      merge_supports( merged, table[kids[i]], scratch );
      std::swap( merged, scratch );
    }
  }

  auto const key = static_cast<ClassIndex>( own );
  auto pos = std::lower_bound( merged.classes.begin(), merged.classes.end(), key );
  if ( pos != merged.classes.end() && *pos == key )
  {
    cand.total = Cost::infinity(); // cycle
    return cand;
  }
  auto const offset = pos - merged.classes.begin();
  merged.classes.insert( pos, key );
  merged.nodes.insert( merged.nodes.begin() + offset, n );

  Cost total = Cost::zero();
  for ( auto m : merged.nodes )
    total += egraph.node_cost( m );
  cand.total = total;
  cand.support = std::move( merged );
  return cand;
}

/// Records `cand` in the node and class tables. Returns true when the class
/// best improved (strictly).
template<class ClassIndex>
bool apply_candidate( EGraph const& egraph, ClassCosts& costs, Candidate<ClassIndex>&& cand,
                      std::vector<UpdateEvent>* trace )
{
  auto const n = cand.node;
  if ( cand.total < costs.node_best[n] )
    costs.node_best[n] = cand.total;

  auto const c = egraph.class_of( n );
  if ( cand.total.is_infinite() || !( cand.total < costs.best_total[c] ) )
    return false;

  costs.best_node[c] = n;
  costs.best_total[c] = cand.total;
  supports_of<ClassIndex>( costs )[c] = std::move( cand.support );
  if ( trace )
    trace->push_back( { c, n, cand.total } );
  return true;
}

} // namespace egx::detail
