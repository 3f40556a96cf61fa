#include <egx/parallel.hpp>

#include "greedy_detail.hpp"

#include <deque>
#include <exception>
#include <optional>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace egx
{

unsigned hardware_workers()
{
#ifdef _OPENMP
  return static_cast<unsigned>( std::max( 1, omp_get_max_threads() ) );
#else
  return 1;
#endif
}

namespace detail
{

namespace
{

/// Evaluates `nodes` concurrently into `out` (empty slot = not ready).
template<class ClassIndex>
void evaluate_batch( EGraph const& egraph, ClassCosts const& costs, std::span<const NodeId> nodes,
                     std::vector<std::optional<Candidate<ClassIndex>>>& out, unsigned workers )
{
  out.clear();
  out.resize( nodes.size() );
  std::exception_ptr failure;
  auto const count = static_cast<std::int64_t>( nodes.size() );

#pragma omp parallel for num_threads( workers ) schedule( dynamic, 4 ) if ( workers > 1 && count > 1 )
  for ( std::int64_t i = 0; i < count; ++i )
  {
    try
    {
      auto const n = nodes[static_cast<std::size_t>( i )];
      if ( is_ready( egraph, costs, n ) )
        out[static_cast<std::size_t>( i )] = compute_candidate<ClassIndex>( egraph, costs, n );
    }
    catch ( ... )
    {
#pragma omp critical( egx_batch_failure )
      if ( !failure )
        failure = std::current_exception();
    }
  }

  if ( failure )
    std::rethrow_exception( failure );
}

/// The staged buffer of one batch: improving candidates, reduced to the
/// minimum per class.
template<class ClassIndex>
class BatchBuffer
{
public:
  void stage( Candidate<ClassIndex>&& cand ) { inserted_.push_back( std::move( cand ) ); }

  void deduplicate( EGraph const& egraph )
  {
    std::sort( inserted_.begin(), inserted_.end(), [&]( auto const& a, auto const& b ) {
      auto const ca = egraph.class_of( a.node ), cb = egraph.class_of( b.node );
      if ( ca != cb )
        return ca < cb;
      if ( a.total != b.total )
        return a.total < b.total;
      return a.node < b.node;
    } );
    auto last = std::unique( inserted_.begin(), inserted_.end(), [&]( auto const& a, auto const& b ) {
      return egraph.class_of( a.node ) == egraph.class_of( b.node );
    } );
    inserted_.erase( last, inserted_.end() );
  }

  std::vector<Candidate<ClassIndex>>& entries() { return inserted_; }
  void clear() { inserted_.clear(); }

private:
  std::vector<Candidate<ClassIndex>> inserted_;
};

template<class ClassIndex>
void run_parallel( EGraph const& egraph, ClassCosts& costs, ParallelOptions const& options )
{
  auto const workers = std::max( 1u, options.workers );
  auto const batch_size = options.batch_size == 0 ? std::size_t{ 4 } * workers : options.batch_size;
  auto* trace = options.trace;

  auto const sched = build_schedule( egraph );
  std::vector<std::optional<Candidate<ClassIndex>>> slots;
  BatchBuffer<ClassIndex> buffer;

  std::vector<std::uint8_t> queued( egraph.num_nodes(), 0 );
  std::vector<std::uint64_t> changed_in( egraph.num_classes(), 0 );
  std::uint64_t epoch = 0;
  std::deque<NodeId> pending;
  std::vector<NodeId> batch;

  for ( auto const& level : sched.levels )
  {
    // every child class is final here: one pass, batch boundaries are free
    std::span<const NodeId> acyclic( level.acyclic );
    for ( std::size_t begin = 0; begin < acyclic.size(); begin += batch_size )
    {
      auto const nodes = acyclic.subspan( begin, std::min( batch_size, acyclic.size() - begin ) );
      evaluate_batch<ClassIndex>( egraph, costs, nodes, slots, workers );

      buffer.clear();
      for ( auto& slot : slots )
      {
        if ( !slot )
          continue;
        if ( slot->total < costs.node_best[slot->node] )
          costs.node_best[slot->node] = slot->total;
        if ( slot->total.is_finite() && slot->total < costs.best_total[egraph.class_of( slot->node )] )
          buffer.stage( std::move( *slot ) );
      }
      buffer.deduplicate( egraph );
      for ( auto& cand : buffer.entries() )
        apply_candidate( egraph, costs, std::move( cand ), trace );
    }

    for ( auto const& component : level.cyclic )
    {
      for ( auto n : component )
      {
        pending.push_back( n );
        queued[n] = 1;
      }
      while ( !pending.empty() )
      {
        batch.assign( pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(
                                                             std::min( batch_size, pending.size() ) ) );
        pending.erase( pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>( batch.size() ) );
        evaluate_batch<ClassIndex>( egraph, costs, batch, slots, workers );

        // commit in pop order; queued flags drop only now, as in the serial loop
        ++epoch;
        for ( std::size_t i = 0; i < batch.size(); ++i )
        {
          auto const n = batch[i];
          queued[n] = 0;
          if ( !is_ready( egraph, costs, n ) )
            continue;
          bool stale = !slots[i].has_value();
          for ( auto k : egraph.child_classes( n ) )
            stale = stale || changed_in[k] == epoch;
          auto cand = stale ? compute_candidate<ClassIndex>( egraph, costs, n ) : std::move( *slots[i] );

          auto const c = egraph.class_of( n );
          if ( !apply_candidate( egraph, costs, std::move( cand ), trace ) )
            continue;
          changed_in[c] = epoch;
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
}

} // namespace

} // namespace detail

GreedyOutcome extract_parallel( EGraph const& egraph, CostKind kind, ParallelOptions const& options )
{
  if ( options.workers == 0 )
    throw std::invalid_argument( "worker count must be positive" );

  GreedyOutcome out;
  out.costs = ClassCosts( egraph, kind );
  if ( egraph.has_compact_class_index() )
    detail::run_parallel<std::uint16_t>( egraph, out.costs, options );
  else
    detail::run_parallel<std::uint32_t>( egraph, out.costs, options );
  out.result = choices_from_costs( egraph, out.costs );
  return out;
}

} // namespace egx
