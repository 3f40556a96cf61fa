#pragma once

#include <egx/greedy.hpp>

#include <cstddef>
#include <vector>

namespace egx
{

struct ParallelOptions
{
  unsigned workers = 1;
  /// Nodes popped per batch; 0 selects 4 x workers.
  std::size_t batch_size = 0;
  std::vector<UpdateEvent>* trace = nullptr;
};

/// Number of workers available to OpenMP on this machine.
unsigned hardware_workers();

/// Batched OpenMP variant of `extract_greedy`.
///
/// Each batch is evaluated concurrently against the class bests as they stood
/// when the batch was popped; the batch's improving candidates are reduced to
/// one minimum per class (smallest node id on ties) and applied by a single
/// thread. Inside cyclic components the candidates are committed in pop
/// order and any candidate whose child class changed earlier in the same
/// commit is recomputed, so every worker count and batch size reaches the
/// same update sequence as the sequential run.
GreedyOutcome extract_parallel( EGraph const& egraph, CostKind kind, ParallelOptions const& options );

} // namespace egx
