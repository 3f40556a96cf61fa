#pragma once

#include <egx/cost.hpp>
#include <egx/egraph.hpp>
#include <egx/extraction.hpp>

#include <cstdint>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace egx
{

enum class CostKind
{
  dag,
  tree,
  depth
};

CostKind parse_cost_kind( std::string_view text );
std::string_view to_string( CostKind kind );

namespace detail
{

/// Class -> node selection sorted by class index. `ClassIndex` is 16 bits wide
/// for graphs with fewer than 65,536 classes.
template<class ClassIndex>
struct Support
{
  using index_type = ClassIndex;

  std::vector<ClassIndex> classes;
  std::vector<NodeId> nodes;

  std::size_t size() const { return classes.size(); }
  void clear()
  {
    classes.clear();
    nodes.clear();
  }
};

using SupportTable = std::variant<std::vector<Support<std::uint16_t>>, std::vector<Support<std::uint32_t>>>;

} // namespace detail

/// Selection record for one node: the chosen node of every class in its
/// support, and the resulting total.
struct CostSet
{
  std::vector<std::pair<ClassId, NodeId>> chosen;
  Cost total = Cost::infinity();
  NodeId for_node = kNoNode;
};

/// Per-class best selections and per-node best totals of a greedy run.
struct ClassCosts
{
  CostKind kind = CostKind::dag;
  std::vector<NodeId> best_node; ///< kNoNode when no finite selection exists
  std::vector<Cost> best_total;
  std::vector<Cost> node_best;
  detail::SupportTable supports;

  ClassCosts() = default;
  ClassCosts( EGraph const& egraph, CostKind kind );

  bool has_best( ClassId c ) const { return best_node[c] != kNoNode; }

  /// Materialized cost set of the class's current best; requires `has_best(c)`.
  CostSet best( ClassId c ) const;

  bool compact_index() const { return supports.index() == 0; }
};

/// A class-best improvement, in the order the run applied them.
struct UpdateEvent
{
  ClassId eclass;
  NodeId node;
  Cost total;

  friend bool operator==( UpdateEvent const&, UpdateEvent const& ) = default;
};

struct GreedyOutcome
{
  ExtractionResult result;
  ClassCosts costs;
};

/// Cost set of `node` against the current class bests. Every child class
/// must already have a best. A node whose own class shows up in the merged
/// children support gets an infinite total.
CostSet calculate_cost_set( EGraph const& egraph, NodeId node, ClassCosts const& costs );

/// Sequential worklist extraction run to its fixpoint.
///
/// Classes are visited bottom-up over the strongly connected components of
/// the class dependency graph: a node is evaluated once its child classes
/// are settled. Inside a cyclic component the classic worklist runs,
/// re-enqueueing parents of any class whose best improved. Equal totals keep
/// the incumbent.
///
/// The result is infeasible (`valid == false`) when some root has no finite
/// selection.
GreedyOutcome extract_greedy( EGraph const& egraph, CostKind kind = CostKind::dag,
                              std::vector<UpdateEvent>* trace = nullptr );

/// Choices induced by a finished run. DAG mode takes the union of the roots'
/// cost sets (earlier roots win on shared classes) and falls back to each
/// class's best node if that union is not a valid extraction; tree and
/// depth modes take each class's best node.
ExtractionResult choices_from_costs( EGraph const& egraph, ClassCosts const& costs );

} // namespace egx
