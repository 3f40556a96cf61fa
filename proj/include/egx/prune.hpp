#pragma once

#include <egx/egraph.hpp>
#include <egx/greedy.hpp>
#include <egx/rational.hpp>

#include <iosfwd>
#include <vector>

namespace egx
{

/// Nodes excluded from exact solving by the cost threshold.
struct PruneMask
{
  Rational theta = Rational( 5, 4 );
  std::vector<bool> pruned; ///< per node
  std::vector<bool> dead;   ///< per class: no member has a finite heuristic cost

  bool is_pruned( NodeId n ) const { return pruned[n]; }
  bool is_dead( ClassId c ) const { return dead[c]; }

  std::vector<NodeId> retained( EGraph const& egraph, ClassId c ) const;
  std::vector<NodeId> pruned_nodes() const;
  std::size_t num_pruned() const;
};

/// Per class, keeps the members whose best heuristic total is at most
/// `theta` times the class minimum; everything else (including members
/// that never got a finite total) is pruned. Throws for `theta < 1`.
PruneMask prune( EGraph const& egraph, ClassCosts const& costs, Rational const& theta );

/// `{"theta": "p/q", "pruned": [node-id, ...], "dead": [class-id, ...]}`
void write_prune_mask( EGraph const& egraph, PruneMask const& mask, std::ostream& out );

} // namespace egx
