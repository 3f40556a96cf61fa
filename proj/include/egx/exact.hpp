#pragma once

#include <egx/egraph.hpp>
#include <egx/extraction.hpp>
#include <egx/prune.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

namespace egx
{

enum class SolveStatus
{
  optimal,    ///< search space exhausted with a solution
  feasible,   ///< stopped by a limit with a solution
  infeasible, ///< search space exhausted without a solution
  limit       ///< stopped by a limit without a solution
};

std::string_view to_string( SolveStatus status );

struct ExactOptions
{
  PruneMask const* mask = nullptr;
  ExtractionResult const* warm = nullptr;
  double time_limit = 60.0; ///< seconds, must be positive
  std::optional<std::uint64_t> node_limit;
  /// Called on each improved incumbent with (elapsed seconds, cost).
  std::function<void( double, Cost )> on_incumbent;
};

struct ExactOutcome
{
  ExtractionResult result;
  SolveStatus status = SolveStatus::limit;
  std::uint64_t nodes_explored = 0;
};

/// Depth-first branch and bound over one node choice per required class.
///
/// Classes are committed root-down; a choice that closes a cycle among
/// committed classes is rejected immediately. The bound of a partial
/// assignment is the committed cost plus, for each still-open class, its
/// cheapest candidate. A valid `warm` extraction seeds the incumbent.
ExactOutcome solve_exact( EGraph const& egraph, ExactOptions const& options = {} );

struct OracleOutcome
{
  ExtractionResult result; ///< `valid == false` when no valid extraction exists
  Cost cost = Cost::infinity();
};

/// Exhaustive search over every one-node-per-class assignment. Throws
/// `std::length_error` when the number of assignments exceeds `cap`.
OracleOutcome enumerate_oracle( EGraph const& egraph, std::uint64_t cap = std::uint64_t{ 1 } << 20 );

} // namespace egx
