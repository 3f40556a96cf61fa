#include <egx/generator.hpp>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace egx
{

EGraph generate_layered( GeneratorConfig const& config )
{
  if ( config.layers == 0 || config.classes_per_layer == 0 || config.max_nodes_per_class == 0 )
    throw std::invalid_argument( "generator needs at least one layer, class and node" );
  if ( config.min_cost > config.max_cost )
    throw std::invalid_argument( "generator cost range is empty" );

  std::mt19937_64 rng( config.seed );
  auto uniform = [&]( std::uint64_t lo, std::uint64_t hi ) {
    return std::uniform_int_distribution<std::uint64_t>( lo, hi )( rng );
  };
  std::bernoulli_distribution back_edge( config.back_edge_probability );

  auto const width = config.classes_per_layer;
  EGraphBuilder builder;
  for ( std::uint32_t l = 0; l < config.layers; ++l )
    for ( std::uint32_t p = 0; p < width; ++p )
      builder.add_class( "c" + std::to_string( l ) + "_" + std::to_string( p ) );
  auto const class_at = [&]( std::uint64_t layer, std::uint64_t pos ) {
    return static_cast<ClassId>( layer * width + pos );
  };

  std::uint64_t next_node = 0;
  std::vector<ClassId> children;
  for ( std::uint32_t l = 0; l < config.layers; ++l )
    for ( std::uint32_t p = 0; p < width; ++p )
    {
      auto const own = class_at( l, p );
      auto const count = uniform( 1, config.max_nodes_per_class );
      for ( std::uint64_t i = 0; i < count; ++i )
      {
        children.clear();
        auto const fan_in = l == 0 ? 0 : uniform( 0, config.max_fan_in );
        for ( std::uint64_t k = 0; k < fan_in; ++k )
        {
          if ( config.window == 0 )
            children.push_back( static_cast<ClassId>( uniform( 0, std::uint64_t{ l } * width - 1 ) ) );
          else
          {
            auto const span = std::min<std::uint64_t>( l, 2 );
            auto const layer = l - uniform( 1, span );
            auto const lo = p >= config.window ? p - config.window : 0;
            auto const hi = std::min<std::uint64_t>( std::uint64_t{ p } + config.window, width - 1 );
            children.push_back( class_at( layer, uniform( lo, hi ) ) );
          }
        }
        if ( config.back_edge_probability > 0 && back_edge( rng ) )
        {
          auto const first = std::uint64_t{ l } * width;
          auto const last = std::uint64_t{ config.layers } * width - 1;
          auto const target = static_cast<ClassId>( uniform( first, last ) );
          if ( target != own )
            children.push_back( target );
        }
        auto const op = children.empty() ? std::string( "leaf" ) : "f" + std::to_string( children.size() );
        builder.add_node( "n" + std::to_string( next_node++ ), op, own, children,
                          uniform( config.min_cost, config.max_cost ) );
      }
    }

  auto const top = config.layers - 1;
  for ( std::uint32_t r = 0; r < std::min( config.roots, width ); ++r )
    builder.add_root( class_at( top, r ) );
  return std::move( builder ).build();
}

} // namespace egx
