#pragma once

#include <egx/exact.hpp>
#include <egx/greedy.hpp>
#include <egx/prune.hpp>
#include <egx/rational.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace egx
{

enum class Mode
{
  greedy,
  parallel,
  exact,
  hybrid
};

Mode parse_mode( std::string_view text );
std::string_view to_string( Mode mode );

enum class DedupLevel
{
  off,
  on,
  aggressive
};

DedupLevel parse_dedup( std::string_view text );

struct PipelineConfig
{
  Mode mode = Mode::greedy;
  CostKind cost = CostKind::dag;
  /// Hybrid only. Infinity disables pruning.
  Rational theta = Rational( 5, 4 );
  unsigned workers = 1;
  std::size_t batch_size = 0;
  double time_limit = 60.0;
};

struct PipelineOutcome
{
  ExtractionResult result;
  /// "heuristic" for greedy modes, the solver status otherwise, or "infeasible".
  std::string status;
  std::optional<GreedyOutcome> heuristic;
  std::optional<PruneMask> mask;
  double heuristic_seconds = 0.0;
  double total_seconds = 0.0;
  /// Exact-solver incumbents as (seconds since pipeline start, cost).
  std::vector<std::pair<double, Cost>> incumbents;
};

/// Runs one extraction configuration end to end. Hybrid is greedy (parallel
/// when `workers > 1`), then prune, then the exact solver warm-started from
/// the greedy result. Exact and hybrid require the DAG cost.
PipelineOutcome run_pipeline( EGraph const& egraph, PipelineConfig const& config );

} // namespace egx
