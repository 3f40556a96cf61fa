#pragma once

#include <egx/cost.hpp>
#include <egx/egraph.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace egx
{

/// Selected node per class, indexed by `ClassId`; `kNoNode` marks "no choice".
using Choices = std::vector<NodeId>;

class invalid_extraction : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ValidityReport
{
  bool roots_covered = true;
  bool children_covered = true;
  bool acyclic = true;

  /// Root or child classes lacking a choice.
  std::vector<ClassId> missing;
  /// Classes along one selection cycle, if any.
  std::vector<ClassId> cycle;

  bool valid() const { return roots_covered && children_covered && acyclic; }
  std::string describe( EGraph const& egraph ) const;
};

struct ExtractionResult
{
  Choices choices;
  Cost dag_cost = Cost::infinity();
  bool valid = false;
};

ValidityReport validate_extraction( EGraph const& egraph, Choices const& choices );

/// Sum of node costs over the distinct chosen nodes reachable from the roots.
/// Throws `invalid_extraction` when `choices` do not form a valid extraction.
Cost evaluate_dag_cost( EGraph const& egraph, Choices const& choices );

/// Same as above for a subset of roots.
Cost evaluate_dag_cost( EGraph const& egraph, Choices const& choices, std::span<const ClassId> roots );

/// Tree cost (shared subterms re-counted) of a valid extraction.
Cost evaluate_tree_cost( EGraph const& egraph, Choices const& choices );

/// Depth cost: node cost plus the maximum over child classes.
Cost evaluate_depth_cost( EGraph const& egraph, Choices const& choices );

/// Keeps only the classes reachable from the roots through chosen nodes.
Choices restrict_to_reachable( EGraph const& egraph, Choices const& choices );

/// Validates and costs `choices`.
ExtractionResult make_result( EGraph const& egraph, Choices choices );

} // namespace egx
