#pragma once

#include <egx/egraph.hpp>
#include <egx/extraction.hpp>
#include <egx/generator.hpp>
#include <egx/io.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace egx::test
{

inline std::filesystem::path data_dir()
{
  return EGX_TEST_DATA;
}

inline EGraph fig2()
{
  return load_egraph_file( data_dir() / "fig2.json" );
}

/// Choices by node name; classes not mentioned stay unchosen.
inline Choices pick( EGraph const& g, std::vector<std::string> const& names )
{
  Choices c( g.num_classes(), kNoNode );
  for ( auto const& n : names )
    c[g.class_of( g.node( n ) )] = g.node( n );
  return c;
}

/// Small instance for oracle comparisons: at most `max_classes` classes,
/// at most 3 nodes per class, class-level cycles when `cycles`.
inline EGraph small_instance( std::uint64_t seed, bool cycles, std::uint32_t max_classes = 10 )
{
  std::mt19937_64 rng( seed * 0x9e3779b97f4a7c15ull + 17 );
  GeneratorConfig cfg;
  do
  {
    cfg.layers = 2 + static_cast<std::uint32_t>( rng() % 4 );
    cfg.classes_per_layer = 1 + static_cast<std::uint32_t>( rng() % 3 );
  } while ( cfg.layers * cfg.classes_per_layer > max_classes );
  cfg.max_nodes_per_class = 3;
  cfg.max_fan_in = 3;
  cfg.roots = 1 + static_cast<std::uint32_t>( rng() % 2 );
  cfg.back_edge_probability = cycles ? 0.25 : 0.0;
  cfg.seed = seed;
  return generate_layered( cfg );
}

/// Medium instance (at most ~500 nodes) for sequential/parallel agreement.
inline EGraph medium_instance( std::uint64_t seed, bool cycles )
{
  std::mt19937_64 rng( seed + 1000 );
  GeneratorConfig cfg;
  cfg.layers = 3 + static_cast<std::uint32_t>( rng() % 8 );
  cfg.classes_per_layer = 2 + static_cast<std::uint32_t>( rng() % 20 );
  cfg.max_nodes_per_class = 3;
  cfg.roots = 1 + static_cast<std::uint32_t>( rng() % 3 );
  cfg.window = rng() % 2 ? 0 : 2;
  cfg.back_edge_probability = cycles ? 0.1 : 0.0;
  cfg.seed = seed;
  while ( cfg.layers * cfg.classes_per_layer * cfg.max_nodes_per_class > 500 )
    --cfg.classes_per_layer;
  return generate_layered( cfg );
}

/// Calls `visit` for every one-node-per-class assignment.
inline void for_each_assignment( EGraph const& g, std::function<void( Choices const& )> const& visit )
{
  Choices c( g.num_classes() );
  std::vector<std::size_t> digit( g.num_classes(), 0 );
  for ( ClassId k = 0; k < g.num_classes(); ++k )
    c[k] = g.members( k ).front();
  while ( true )
  {
    visit( c );
    std::size_t k = g.num_classes();
    while ( k > 0 )
    {
      --k;
      auto m = g.members( static_cast<ClassId>( k ) );
      if ( ++digit[k] < m.size() )
      {
        c[k] = m[digit[k]];
        break;
      }
      digit[k] = 0;
      c[k] = m.front();
      if ( k == 0 )
        return;
    }
    if ( g.num_classes() == 0 )
      return;
  }
}

} // namespace egx::test
