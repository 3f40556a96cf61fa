#pragma once

#include <egx/egraph.hpp>
#include <egx/extraction.hpp>
#include <egx/prune.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace egx
{

class ilp_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class VarKind : std::uint8_t
{
  select, ///< s_i, binary, per node
  active, ///< A_j, binary, per class
  opp,    ///< Opp_i = 1 - s_i, binary, per node
  level   ///< L_j, continuous in [0, |C|], per class
};

struct Variable
{
  VarKind kind;
  std::uint32_t index; ///< dense node or class index

  /// `s_<node>`, `a_<class>`, `o_<node>`, `l_<class>`
  std::string name() const;
  friend bool operator==( Variable const&, Variable const& ) = default;
};

struct Term
{
  std::int64_t coef;
  std::uint32_t var; ///< index into `IlpModel::variables`
};

enum class Sense : std::uint8_t
{
  le,
  ge,
  eq
};

struct Constraint
{
  std::string name;
  std::vector<Term> terms;
  Sense sense;
  std::int64_t rhs;
};

/// Extraction ILP over the retained part of an e-graph.
///
/// Selectable nodes get s/Opp variables and appear in the objective and in
/// the eq5b/eq5c/eq5e/eq5f rows. Nodes that may not be selected (pruned,
/// self-cyclic, or with a dead child class) only get an eq5g fixing row.
/// Dead classes are dropped. Rows tagged `link` tie each non-root class's
/// activation to a selected parent, so active classes are always reachable.
struct IlpModel
{
  std::size_t num_classes = 0; ///< |C| of the whole e-graph
  std::int64_t big_m = 0;      ///< |C| + 1

  std::vector<Variable> variables;
  std::vector<NodeId> free_nodes;
  std::vector<NodeId> fixed_nodes;
  std::vector<ClassId> live_classes;

  std::vector<Term> objective;
  std::vector<Constraint> eq5b, eq5c, eq5d, eq5e, eq5f, eq5g, link;

  /// Heuristic start: variable index -> 0/1 for every s, A and Opp variable.
  std::vector<std::pair<std::uint32_t, int>> warm_start;

  std::optional<std::uint32_t> find( Variable v ) const;
  std::optional<std::uint32_t> find( std::string const& name ) const;
  std::uint32_t index_of( Variable v ) const;

  /// All constraint families in emission order.
  std::vector<std::vector<Constraint> const*> families() const;

  std::size_t num_constraints() const;

  /// Name of the first row violated by `values` (one entry per variable),
  /// or nullopt when every row and bound holds within `tolerance`.
  std::optional<std::string> first_violation( std::vector<double> const& values, double tolerance = 1e-9 ) const;

  double objective_value( std::vector<double> const& values ) const;

private:
  friend IlpModel build_ilp( EGraph const&, PruneMask const*, ExtractionResult const* );
  std::unordered_map<std::string, std::uint32_t> by_name_;
};

/// Builds the model; `mask` and `warm` are optional. Throws `ilp_error` when a
/// root class is dead or the warm start selects a node the model fixes to 0.
IlpModel build_ilp( EGraph const& egraph, PruneMask const* mask = nullptr, ExtractionResult const* warm = nullptr );

/// CPLEX-LP text (Minimize / Subject To / Bounds / Binaries / End).
void emit_lp( IlpModel const& model, std::ostream& out );

/// One `<variable> <0|1>` line per warm-start entry. Throws without a warm start.
void emit_warmstart( IlpModel const& model, std::ostream& out );

/// Reads `<variable> <value>` lines ('#' starts a comment) and decodes the
/// selected node of each active class.
ExtractionResult parse_solution( IlpModel const& model, EGraph const& egraph, std::istream& in );

/// Full variable assignment induced by an extraction restricted to its
/// reachable classes; L_j is the height of class j in the chosen term DAG.
std::vector<double> assignment_from_extraction( IlpModel const& model, EGraph const& egraph, Choices const& choices );

} // namespace egx
