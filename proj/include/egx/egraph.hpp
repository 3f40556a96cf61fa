#pragma once

#include <egx/cost.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace egx
{

using NodeId = std::uint32_t;
using ClassId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr ClassId kNoClass = std::numeric_limits<ClassId>::max();

/// Raised for structurally broken instances (dangling ids, bad costs, empty roots).
class invalid_egraph : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class EGraphBuilder;

/// Immutable e-graph instance with dense node and class indexes.
///
/// Node ids are assigned in insertion order, class ids in order of first
/// appearance. Child lists are kept as given; `child_classes` is the sorted,
/// de-duplicated view used by the extraction kernels.
class EGraph
{
public:
  EGraph() = default;

  std::size_t num_nodes() const { return node_class_.size(); }
  std::size_t num_classes() const { return class_names_.size(); }

  std::string_view node_name( NodeId n ) const { return node_names_[n]; }
  std::string_view op( NodeId n ) const { return ops_[n]; }
  ClassId class_of( NodeId n ) const { return node_class_[n]; }
  Cost node_cost( NodeId n ) const { return Cost( costs_[n] ); }

  std::span<const ClassId> children( NodeId n ) const
  {
    return { children_.data() + child_offsets_[n], children_.data() + child_offsets_[n + 1] };
  }
  std::span<const ClassId> child_classes( NodeId n ) const
  {
    return { unique_children_.data() + unique_offsets_[n], unique_children_.data() + unique_offsets_[n + 1] };
  }
  bool is_leaf( NodeId n ) const { return child_offsets_[n] == child_offsets_[n + 1]; }

  /// Node lists its own class among its children; never selectable.
  bool is_self_cyclic( NodeId n ) const { return self_cyclic_[n] != 0; }

  std::string_view class_name( ClassId c ) const { return class_names_[c]; }
  std::span<const NodeId> members( ClassId c ) const
  {
    return { members_.data() + member_offsets_[c], members_.data() + member_offsets_[c + 1] };
  }
  /// Nodes having `c` among their children (each listed once, ascending).
  std::span<const NodeId> parents( ClassId c ) const
  {
    return { parents_.data() + parent_offsets_[c], parents_.data() + parent_offsets_[c + 1] };
  }
  std::span<const ClassId> roots() const { return roots_; }

  std::optional<NodeId> find_node( std::string_view name ) const;
  std::optional<ClassId> find_class( std::string_view name ) const;

  /// Node id by name; throws `std::out_of_range` when absent.
  NodeId node( std::string_view name ) const;
  /// Class id by name; throws `std::out_of_range` when absent.
  ClassId eclass( std::string_view name ) const;

  /// Class indexes fit in 16 bits.
  bool has_compact_class_index() const { return num_classes() < 65536u; }

private:
  friend class EGraphBuilder;

  std::vector<std::string> node_names_;
  std::vector<std::string> ops_;
  std::vector<ClassId> node_class_;
  std::vector<Cost::value_type> costs_;
  std::vector<std::uint8_t> self_cyclic_;
  std::vector<std::uint32_t> child_offsets_;
  std::vector<ClassId> children_;
  std::vector<std::uint32_t> unique_offsets_;
  std::vector<ClassId> unique_children_;

  std::vector<std::string> class_names_;
  std::vector<std::uint32_t> member_offsets_;
  std::vector<NodeId> members_;
  std::vector<std::uint32_t> parent_offsets_;
  std::vector<NodeId> parents_;
  std::vector<ClassId> roots_;

  std::unordered_map<std::string, NodeId> node_index_;
  std::unordered_map<std::string, ClassId> class_index_;
};

/// Incremental construction of an `EGraph`; `build` validates and indexes.
class EGraphBuilder
{
public:
  /// Returns the existing class of that name or creates it.
  ClassId add_class( std::string_view name );

  NodeId add_node( std::string_view name, std::string_view op, ClassId eclass, std::vector<ClassId> children,
                   Cost::value_type cost );

  void add_root( ClassId c );

  std::size_t num_classes() const { return class_names_.size(); }
  std::size_t num_nodes() const { return nodes_.size(); }

  EGraph build() &&;

private:
  struct PendingNode
  {
    std::string name;
    std::string op;
    ClassId eclass;
    std::vector<ClassId> children;
    Cost::value_type cost;
  };

  std::vector<PendingNode> nodes_;
  std::vector<std::string> class_names_;
  std::unordered_map<std::string, ClassId> class_index_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::vector<ClassId> roots_;
};

/// Outcome of redundancy elimination.
struct DedupResult
{
  EGraph graph;
  std::vector<std::string> removed;
};

/// Keeps one minimum-cost node per (op, child-class set) within each class,
/// or per child-class set alone when `aggressive`. Ties go to the smaller id.
DedupResult deduplicate( const EGraph& egraph, bool aggressive );

} // namespace egx
