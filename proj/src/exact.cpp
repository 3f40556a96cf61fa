#include <egx/exact.hpp>

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>

namespace egx
{

std::string_view to_string( SolveStatus status )
{
  switch ( status )
  {
  case SolveStatus::optimal:
    return "optimal";
  case SolveStatus::feasible:
    return "feasible";
  case SolveStatus::infeasible:
    return "infeasible";
  case SolveStatus::limit:
    return "limit";
  }
  return "?";
}

namespace
{

class BranchAndBound
{
public:
  BranchAndBound( EGraph const& egraph, ExactOptions const& options )
      : egraph_( egraph ), options_( options ), start_( std::chrono::steady_clock::now() )
  {
    prepare_candidates();
  }

  ExactOutcome run()
  {
    ExactOutcome out;
    if ( options_.warm && options_.warm->valid )
      record( restrict_to_reachable( egraph_, options_.warm->choices ), options_.warm->dag_cost );

    bool feasible_roots = true;
    for ( auto r : egraph_.roots() )
      feasible_roots = feasible_roots && !candidates_[r].empty();

    bool exhausted = true;
    if ( feasible_roots )
      exhausted = search();

    out.nodes_explored = explored_;
    if ( incumbent_cost_.is_finite() )
    {
      out.result = make_result( egraph_, incumbent_ );
      out.status = exhausted ? SolveStatus::optimal : SolveStatus::feasible;
    }
    else
    {
      out.result.choices.assign( egraph_.num_classes(), kNoNode );
      out.status = exhausted ? SolveStatus::infeasible : SolveStatus::limit;
    }
    return out;
  }

private:
  struct Frame
  {
    ClassId eclass;
    std::uint32_t next = 0;
    NodeId applied = kNoNode;
  };

  void prepare_candidates()
  {
    auto const num_classes = egraph_.num_classes();
    auto const* mask = options_.mask;

    std::vector<bool> allowed( egraph_.num_nodes(), false );
    for ( NodeId n = 0; n < egraph_.num_nodes(); ++n )
      allowed[n] = !egraph_.is_self_cyclic( n ) && !( mask && ( mask->is_pruned( n ) || mask->is_dead( egraph_.class_of( n ) ) ) );

    // least fixpoint: a class is live once one allowed member has only live children
    std::vector<bool> live( num_classes, false );
    std::vector<std::uint32_t> missing( egraph_.num_nodes(), 0 );
    std::vector<ClassId> work;
    for ( NodeId n = 0; n < egraph_.num_nodes(); ++n )
    {
      missing[n] = static_cast<std::uint32_t>( egraph_.child_classes( n ).size() );
      if ( allowed[n] && missing[n] == 0 && !live[egraph_.class_of( n )] )
      {
        live[egraph_.class_of( n )] = true;
        work.push_back( egraph_.class_of( n ) );
      }
    }
    while ( !work.empty() )
    {
      auto const c = work.back();
      work.pop_back();
      for ( auto p : egraph_.parents( c ) )
        if ( --missing[p] == 0 && allowed[p] && !live[egraph_.class_of( p )] )
        {
          live[egraph_.class_of( p )] = true;
          work.push_back( egraph_.class_of( p ) );
        }
    }

    candidates_.assign( num_classes, {} );
    cheapest_.assign( num_classes, Cost::infinity() );
    for ( ClassId c = 0; c < num_classes; ++c )
    {
      if ( !live[c] )
        continue;
      for ( auto n : egraph_.members( c ) )
      {
        if ( !allowed[n] )
          continue;
        auto kids = egraph_.child_classes( n );
        if ( std::all_of( kids.begin(), kids.end(), [&]( ClassId k ) { return live[k]; } ) )
        {
          candidates_[c].push_back( n );
          cheapest_[c] = std::min( cheapest_[c], egraph_.node_cost( n ) );
        }
      }
    }

    // cheapest local estimate first; the warm choice leads
    Choices hint( num_classes, kNoNode );
    if ( options_.warm && options_.warm->valid && options_.warm->choices.size() == num_classes )
      hint = options_.warm->choices;
    for ( ClassId c = 0; c < num_classes; ++c )
    {
      auto estimate = [&]( NodeId n ) {
        Cost e = egraph_.node_cost( n );
        for ( auto k : egraph_.child_classes( n ) )
          e += cheapest_[k];
        return e;
      };
      std::stable_sort( candidates_[c].begin(), candidates_[c].end(), [&]( NodeId a, NodeId b ) {
        if ( ( a == hint[c] ) != ( b == hint[c] ) )
          return a == hint[c];
        auto const ea = estimate( a ), eb = estimate( b );
        return ea != eb ? ea < eb : a < b;
      } );
    }
  }

  void record( Choices choices, Cost cost )
  {
    if ( !( cost < incumbent_cost_ ) )
      return;
    incumbent_ = std::move( choices );
    incumbent_cost_ = cost;
    if ( options_.on_incumbent )
      options_.on_incumbent( elapsed(), cost );
  }

  double elapsed() const
  {
    return std::chrono::duration<double>( std::chrono::steady_clock::now() - start_ ).count();
  }

  bool out_of_budget()
  {
    if ( options_.node_limit && explored_ >= *options_.node_limit )
      return true;
    return ( ++iterations_ & 255u ) == 0 && elapsed() >= options_.time_limit;
  }

  void require( ClassId k )
  {
    if ( required_[k]++ == 0 && choice_[k] == kNoNode )
    {
      open_.emplace( candidates_[k].size(), k );
      open_bound_ += cheapest_[k];
    }
  }

  void release( ClassId k )
  {
    if ( --required_[k] == 0 && choice_[k] == kNoNode )
    {
      open_.erase( { candidates_[k].size(), k } );
      open_bound_ = Cost( open_bound_.value() - cheapest_[k].value() );
    }
  }

  ClassId take_open()
  {
    auto const it = open_.begin();
    auto const c = it->second;
    open_.erase( it );
    open_bound_ = Cost( open_bound_.value() - cheapest_[c].value() );
    return c;
  }

  void put_back_open( ClassId c )
  {
    open_.emplace( candidates_[c].size(), c );
    open_bound_ += cheapest_[c];
  }

  void apply( ClassId c, NodeId n )
  {
    choice_[c] = n;
    committed_ += egraph_.node_cost( n );
    for ( auto k : egraph_.child_classes( n ) )
      require( k );
  }

  void undo( ClassId c, NodeId n )
  {
    for ( auto k : egraph_.child_classes( n ) )
      release( k );
    choice_[c] = kNoNode;
    committed_ = Cost( committed_.value() - egraph_.node_cost( n ).value() );
  }

  /// Choosing `n` for `c` closes a cycle through already committed classes.
  bool closes_cycle( ClassId c, NodeId n )
  {
    ++stamp_;
    dfs_.clear();
    for ( auto k : egraph_.child_classes( n ) )
      if ( choice_[k] != kNoNode && seen_[k] != stamp_ )
      {
        seen_[k] = stamp_;
        dfs_.push_back( k );
      }
    while ( !dfs_.empty() )
    {
      auto const k = dfs_.back();
      dfs_.pop_back();
      for ( auto g : egraph_.child_classes( choice_[k] ) )
      {
        if ( g == c )
          return true;
        if ( choice_[g] != kNoNode && seen_[g] != stamp_ )
        {
          seen_[g] = stamp_;
          dfs_.push_back( g );
        }
      }
    }
    return false;
  }

  /// Returns true when the space was exhausted.
  bool search()
  {
    auto const num_classes = egraph_.num_classes();
    choice_.assign( num_classes, kNoNode );
    required_.assign( num_classes, 0 );
    seen_.assign( num_classes, 0 );

    for ( auto r : egraph_.roots() )
      require( r );

    std::vector<Frame> stack;
    stack.push_back( { take_open() } );

    while ( !stack.empty() )
    {
      if ( out_of_budget() )
        return false;

      auto& frame = stack.back();
      if ( frame.applied != kNoNode )
      {
        undo( frame.eclass, frame.applied );
        frame.applied = kNoNode;
      }

      auto const& cands = candidates_[frame.eclass];
      while ( frame.next < cands.size() )
      {
        auto const n = cands[frame.next++];
        Cost bound = committed_ + open_bound_ + egraph_.node_cost( n );
        for ( auto k : egraph_.child_classes( n ) )
          if ( required_[k] == 0 && choice_[k] == kNoNode )
            bound += cheapest_[k];
        if ( !( bound < incumbent_cost_ ) || closes_cycle( frame.eclass, n ) )
          continue;
        apply( frame.eclass, n );
        frame.applied = n;
        ++explored_;
        break;
      }

      if ( frame.applied == kNoNode )
      {
        put_back_open( frame.eclass );
        stack.pop_back();
        continue;
      }

      if ( open_.empty() )
      {
        record( choice_, committed_ );
        continue;
      }
      stack.push_back( { take_open() } );
    }
    return true;
  }

  EGraph const& egraph_;
  ExactOptions const& options_;
  std::chrono::steady_clock::time_point start_;

  std::vector<std::vector<NodeId>> candidates_;
  std::vector<Cost> cheapest_;

  Choices choice_;
  std::vector<std::uint32_t> required_;
  std::set<std::pair<std::size_t, ClassId>> open_;
  Cost open_bound_ = Cost::zero();
  Cost committed_ = Cost::zero();

  std::vector<std::uint64_t> seen_;
  std::uint64_t stamp_ = 0;
  std::vector<ClassId> dfs_;

  Choices incumbent_;
  Cost incumbent_cost_ = Cost::infinity();
  std::uint64_t explored_ = 0;
  std::uint64_t iterations_ = 0;
};

} // namespace

ExactOutcome solve_exact( EGraph const& egraph, ExactOptions const& options )
{
  if ( !( options.time_limit > 0 ) )
    throw std::invalid_argument( "time limit must be positive" );
  return BranchAndBound( egraph, options ).run();
}

OracleOutcome enumerate_oracle( EGraph const& egraph, std::uint64_t cap )
{
  auto const num_classes = egraph.num_classes();
  std::uint64_t combinations = 1;
  for ( ClassId c = 0; c < num_classes; ++c )
  {
    auto const k = egraph.members( c ).size();
    if ( combinations > cap / k )
      throw std::length_error( "enumeration exceeds the cap of " + std::to_string( cap ) + " assignments" );
    combinations *= k;
  }

  OracleOutcome best;
  best.result.choices.assign( num_classes, kNoNode );
  std::vector<std::size_t> digit( num_classes, 0 );
  Choices choices( num_classes );
  for ( ClassId c = 0; c < num_classes; ++c )
    choices[c] = egraph.members( c ).front();

  for ( std::uint64_t i = 0; i < combinations; ++i )
  {
    if ( validate_extraction( egraph, choices ).valid() )
    {
      auto const cost = evaluate_dag_cost( egraph, choices );
      if ( cost < best.cost )
      {
        best.cost = cost;
        best.result.choices = choices;
      }
    }
    // odometer, last class fastest: lexicographic order of choice vectors
    for ( auto c = static_cast<std::int64_t>( num_classes ) - 1; c >= 0; --c )
    {
      auto const cls = static_cast<ClassId>( c );
      auto members = egraph.members( cls );
      if ( ++digit[cls] < members.size() )
      {
        choices[cls] = members[digit[cls]];
        break;
      }
      digit[cls] = 0;
      choices[cls] = members.front();
    }
  }

  if ( best.cost.is_finite() )
    best.result = make_result( egraph, restrict_to_reachable( egraph, best.result.choices ) );
  return best;
}

} // namespace egx
