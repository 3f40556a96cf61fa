#include <doctest.h>

#include "support.hpp"

#include <egx/prune.hpp>

#include <json.hpp>

#include <sstream>

using namespace egx;
using namespace egx::test;

namespace
{

std::vector<NodeId> ids( EGraph const& g, std::vector<std::string> const& names )
{
  std::vector<NodeId> out;
  for ( auto const& n : names )
    out.push_back( g.node( n ) );
  return out;
}

bool subset( std::vector<bool> const& a, std::vector<bool> const& b )
{
  for ( std::size_t i = 0; i < a.size(); ++i )
    if ( a[i] && !b[i] )
      return false;
  return true;
}

} // namespace

TEST_SUITE( "prune" )
{
  TEST_CASE( "fig2 at theta 1.25" )
  {
    auto const g = fig2();
    auto const costs = extract_greedy( g ).costs;
    auto const mask = prune( g, costs, Rational::parse( "1.25" ) );
    CHECK( mask.pruned_nodes() == ids( g, { "E5", "E10" } ) );
    CHECK( mask.retained( g, g.class_of( g.node( "E2" ) ) ) == ids( g, { "E2", "E3" } ) );
    CHECK( mask.retained( g, g.class_of( g.node( "E6" ) ) ) == ids( g, { "E6" } ) );
    CHECK( mask.retained( g, g.class_of( g.node( "E9" ) ) ) == ids( g, { "E9" } ) );
    CHECK( mask.num_pruned() == 2 );
  }

  TEST_CASE( "theta 1 keeps exactly the minimum, ties included" )
  {
    EGraphBuilder b;
    auto c = b.add_class( "c" );
    b.add_node( "p", "x", c, {}, 4 );
    b.add_node( "q", "y", c, {}, 4 );
    b.add_node( "r", "z", c, {}, 5 );
    b.add_root( c );
    auto const g = std::move( b ).build();
    auto const costs = extract_greedy( g ).costs;
    CHECK( prune( g, costs, Rational( 1, 1 ) ).pruned_nodes() == ids( g, { "r" } ) );
    // boundary: 5 <= 4 * 5/4 holds exactly
    CHECK( prune( g, costs, Rational( 5, 4 ) ).pruned_nodes().empty() );
    CHECK( prune( g, costs, Rational( 10, 8 ) ).pruned == prune( g, costs, Rational( 5, 4 ) ).pruned );
    CHECK( prune( g, costs, Rational( 124, 100 ) ).pruned_nodes() == ids( g, { "r" } ) );
    CHECK_THROWS( prune( g, costs, Rational( 99, 100 ) ) );
  }

  TEST_CASE( "infinite nodes are always pruned and dead classes reported" )
  {
    EGraphBuilder b;
    auto x = b.add_class( "x" ), y = b.add_class( "y" ), d = b.add_class( "d" );
    b.add_node( "nx", "f", x, { y }, 1 );
    b.add_node( "ny", "g", y, { x }, 1 );
    b.add_node( "lx", "leaf", x, {}, 1 );
    b.add_node( "loop", "h", d, { d }, 1 );
    b.add_node( "top", "t", y, { d }, 1 );
    b.add_root( y );
    auto const g = std::move( b ).build();
    auto const costs = extract_greedy( g ).costs;
    auto const mask = prune( g, costs, Rational::infinity() );
    CHECK( mask.is_pruned( g.node( "nx" ) ) );
    CHECK( mask.is_pruned( g.node( "loop" ) ) );
    CHECK( mask.is_pruned( g.node( "top" ) ) );
    CHECK_FALSE( mask.is_pruned( g.node( "lx" ) ) );
    CHECK_FALSE( mask.is_pruned( g.node( "ny" ) ) );
    CHECK( mask.is_dead( d ) );
    CHECK_FALSE( mask.is_dead( x ) );

    std::ostringstream out;
    write_prune_mask( g, mask, out );
    auto const j = nlohmann::json::parse( out.str() );
    CHECK( j["theta"] == "inf" );
    CHECK( j["pruned"].size() == 3 );
    CHECK( j["dead"].size() == 1 );
  }

  TEST_CASE( "mask invariants, monotonicity and warm-start survival" )
  {
    std::vector<Rational> thetas = { Rational( 1, 1 ), Rational( 21, 20 ), Rational( 5, 4 ), Rational( 3, 2 ),
                                     Rational::infinity() };
    for ( std::uint64_t seed = 0; seed < 80; ++seed )
    {
      auto const g = medium_instance( seed, seed % 2 == 1 );
      auto const out = extract_greedy( g );
      std::vector<PruneMask> masks;
      for ( auto const& t : thetas )
        masks.push_back( prune( g, out.costs, t ) );

      for ( std::size_t i = 0; i + 1 < masks.size(); ++i )
        CHECK( subset( masks[i + 1].pruned, masks[i].pruned ) );

      for ( auto const& m : masks )
      {
        for ( ClassId c = 0; c < g.num_classes(); ++c )
        {
          bool any_finite = false;
          for ( auto n : g.members( c ) )
          {
            any_finite = any_finite || out.costs.node_best[n].is_finite();
            if ( out.costs.node_best[n].is_infinite() )
              CHECK( m.is_pruned( n ) );
          }
          CHECK( m.is_dead( c ) == !any_finite );
          if ( any_finite )
            CHECK_FALSE( m.retained( g, c ).empty() );
        }
        if ( out.result.valid )
          for ( ClassId c = 0; c < g.num_classes(); ++c )
            if ( out.result.choices[c] != kNoNode )
              CHECK_FALSE( m.is_pruned( out.result.choices[c] ) );
      }
    }
  }
}
