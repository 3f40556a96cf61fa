#include <doctest.h>

#include "support.hpp"

#include <egx/greedy.hpp>

#include <algorithm>
#include <map>

using namespace egx;
using namespace egx::test;

namespace
{

/// Minimum over all valid assignments of `eval`.
template<class Eval>
Cost brute_force( EGraph const& g, Eval eval )
{
  Cost best = Cost::infinity();
  for_each_assignment( g, [&]( Choices const& c ) {
    if ( validate_extraction( g, c ).valid() )
      best = std::min( best, eval( g, c ) );
  } );
  return best;
}

EGraph two_cycle()
{
  EGraphBuilder b;
  auto x = b.add_class( "x" ), y = b.add_class( "y" );
  b.add_node( "nx", "f", x, { y }, 1 );
  b.add_node( "ny", "g", y, { x }, 1 );
  b.add_node( "lx", "leaf", x, {}, 1 );
  b.add_root( y );
  return std::move( b ).build();
}

} // namespace

TEST_SUITE( "greedy" )
{
  TEST_CASE( "fig2 dag extraction" )
  {
    auto const g = fig2();
    auto const out = extract_greedy( g, CostKind::dag );
    REQUIRE( out.result.valid );
    CHECK( out.result.dag_cost.value() == 17 );

    auto const& cc = out.costs;
    auto const or_class = g.class_of( g.node( "E2" ) );
    auto const a_class = g.class_of( g.node( "E6" ) );
    CHECK( cc.best_node[or_class] == g.node( "E2" ) );
    CHECK( cc.best_total[or_class].value() == 11 );
    CHECK( cc.node_best[g.node( "E3" )].value() == 12 );
    CHECK( cc.best_node[a_class] == g.node( "E6" ) );
    CHECK( cc.best_total[a_class].value() == 2 );
    CHECK( cc.node_best[g.node( "E5" )].value() == 6 );
    CHECK( cc.best_total[g.class_of( g.node( "E7" ) )].value() == 4 );
    CHECK( out.result.choices == restrict_to_reachable( g, pick( g, { "E1", "E2", "E6", "E7", "E8", "E9" } ) ) );
  }

  TEST_CASE( "cost set of E1 counts the shared E6 once" )
  {
    auto const g = fig2();
    auto const out = extract_greedy( g );
    auto const cs = calculate_cost_set( g, g.node( "E1" ), out.costs );
    CHECK( cs.for_node == g.node( "E1" ) );
    CHECK( cs.total.value() == 4 + 11 + 4 - 2 );
    auto const e6 = std::count_if( cs.chosen.begin(), cs.chosen.end(),
                                   [&]( auto const& p ) { return p.second == g.node( "E6" ); } );
    CHECK( e6 == 1 );
    CHECK( std::is_sorted( cs.chosen.begin(), cs.chosen.end() ) );
    // for_node's class maps to for_node
    CHECK( std::find( cs.chosen.begin(), cs.chosen.end(), std::pair{ g.class_of( g.node( "E1" ) ), g.node( "E1" ) } ) !=
           cs.chosen.end() );

    auto const leaf = calculate_cost_set( g, g.node( "E8" ), out.costs );
    CHECK( leaf.total.value() == 2 );
    CHECK( leaf.chosen == std::vector<std::pair<ClassId, NodeId>>{ { g.class_of( g.node( "E8" ) ), g.node( "E8" ) } } );
  }

  TEST_CASE( "a support containing the node's own class costs infinity" )
  {
    auto const g = two_cycle();
    auto const out = extract_greedy( g );
    CHECK( calculate_cost_set( g, g.node( "nx" ), out.costs ).total.is_infinite() );
    CHECK( out.costs.node_best[g.node( "nx" )].is_infinite() );
    REQUIRE( out.result.valid );
    CHECK( out.result.dag_cost.value() == 2 );
  }

  TEST_CASE( "cost set requires ready children" )
  {
    auto const g = fig2();
    ClassCosts empty( g, CostKind::dag );
    CHECK_THROWS( calculate_cost_set( g, g.node( "E1" ), empty ) );
  }

  TEST_CASE( "chain with unit costs" )
  {
    EGraphBuilder b;
    auto c0 = b.add_class( "c0" ), c1 = b.add_class( "c1" ), c2 = b.add_class( "c2" );
    b.add_node( "n0", "x", c0, {}, 1 );
    b.add_node( "n1", "f", c1, { c0 }, 1 );
    b.add_node( "n2", "f", c2, { c1 }, 1 );
    b.add_root( c2 );
    auto const g = std::move( b ).build();
    for ( auto kind : { CostKind::dag, CostKind::tree, CostKind::depth } )
      CHECK( extract_greedy( g, kind ).costs.best_total[c2].value() == 3 );
    CHECK( extract_greedy( g ).result.dag_cost.value() == 3 );
  }

  TEST_CASE( "only self-cyclic root is infeasible" )
  {
    EGraphBuilder b;
    auto c = b.add_class( "c" );
    b.add_node( "loop", "f", c, { c }, 1 );
    b.add_root( c );
    auto const g = std::move( b ).build();
    auto const out = extract_greedy( g );
    CHECK_FALSE( out.result.valid );
    CHECK( out.result.dag_cost.is_infinite() );
  }

  TEST_CASE( "fixpoint is locally optimal" )
  {
    for ( std::uint64_t seed = 0; seed < 60; ++seed )
      for ( auto kind : { CostKind::dag, CostKind::tree, CostKind::depth } )
      {
        auto const g = medium_instance( seed, seed % 2 == 1 );
        auto const out = extract_greedy( g, kind );
        auto const& cc = out.costs;
        for ( NodeId n = 0; n < g.num_nodes(); ++n )
        {
          auto const kids = g.child_classes( n );
          bool ready = std::all_of( kids.begin(), kids.end(), [&]( ClassId k ) { return cc.has_best( k ); } );
          if ( !ready || g.is_self_cyclic( n ) )
            continue;
          auto const cs = calculate_cost_set( g, n, cc );
          if ( cs.total.is_finite() )
          {
            REQUIRE( cc.has_best( g.class_of( n ) ) );
            CHECK( cc.best_total[g.class_of( n )] <= cs.total );
          }
          CHECK( cc.best_total[g.class_of( n )] <= cc.node_best[n] );
        }
      }
  }

  TEST_CASE( "updates only ever improve" )
  {
    for ( std::uint64_t seed = 0; seed < 40; ++seed )
    {
      auto const g = medium_instance( seed, true );
      std::vector<UpdateEvent> trace;
      auto const out = extract_greedy( g, CostKind::dag, &trace );
      std::map<ClassId, Cost> last;
      for ( auto const& e : trace )
      {
        if ( auto it = last.find( e.eclass ); it != last.end() )
          CHECK( e.total < it->second );
        last[e.eclass] = e.total;
      }
      for ( auto const& [c, total] : last )
        CHECK( out.costs.best_total[c] == total );

      std::vector<UpdateEvent> again;
      extract_greedy( g, CostKind::dag, &again );
      CHECK( again == trace );
    }
  }

  TEST_CASE( "reported cost is the cost of the reported choices" )
  {
    int single_root_equal = 0, single_root = 0;
    for ( std::uint64_t seed = 0; seed < 80; ++seed )
    {
      auto const g = medium_instance( seed, seed % 2 == 1 );
      auto const out = extract_greedy( g );
      if ( !out.result.valid )
        continue;
      CHECK( evaluate_dag_cost( g, out.result.choices ) == out.result.dag_cost );
      CHECK( validate_extraction( g, out.result.choices ).valid() );
      if ( g.roots().size() == 1 )
      {
        ++single_root;
        auto const r = g.roots()[0];
        CHECK( out.result.dag_cost <= out.costs.best_total[r] );
        single_root_equal += out.result.dag_cost == out.costs.best_total[r];
      }
    }
    MESSAGE( single_root_equal << " of " << single_root << " single-root runs report exactly the root total" );
  }

  TEST_CASE( "tree and depth modes match brute force on acyclic graphs" )
  {
    for ( std::uint64_t seed = 0; seed < 50; ++seed )
    {
      auto const g = small_instance( seed, false, 12 );
      auto const tree = extract_greedy( g, CostKind::tree );
      REQUIRE( tree.result.valid );
      Cost sum = Cost::zero();
      for ( auto r : g.roots() )
        sum += tree.costs.best_total[r];
      CHECK( sum == brute_force( g, []( EGraph const& gg, Choices const& c ) { return evaluate_tree_cost( gg, c ); } ) );
      CHECK( evaluate_tree_cost( g, tree.result.choices ) == sum );

      auto const depth = extract_greedy( g, CostKind::depth );
      REQUIRE( depth.result.valid );
      Cost deepest = Cost::zero();
      for ( auto r : g.roots() )
        deepest = max_of( deepest, depth.costs.best_total[r] );
      CHECK( deepest ==
             brute_force( g, []( EGraph const& gg, Choices const& c ) { return evaluate_depth_cost( gg, c ); } ) );
    }
  }

  TEST_CASE( "class index width follows the class count" )
  {
    CHECK( ClassCosts( fig2(), CostKind::dag ).compact_index() );

    GeneratorConfig cfg;
    cfg.layers = 1;
    cfg.classes_per_layer = 70000;
    cfg.max_nodes_per_class = 1;
    auto const wide = generate_layered( cfg );
    CHECK_FALSE( wide.has_compact_class_index() );
    auto const out = extract_greedy( wide );
    CHECK_FALSE( out.costs.compact_index() );
    CHECK( out.result.valid );
  }

  TEST_CASE( "cost kind names" )
  {
    CHECK( parse_cost_kind( "dag" ) == CostKind::dag );
    CHECK( parse_cost_kind( "tree" ) == CostKind::tree );
    CHECK( parse_cost_kind( "depth" ) == CostKind::depth );
    CHECK_THROWS( parse_cost_kind( "dagg" ) );
  }
}
