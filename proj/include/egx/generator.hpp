#pragma once

#include <egx/egraph.hpp>

#include <cstdint>

namespace egx
{

/// Seeded layered e-graph generator for property corpora and benchmarks.
///
/// Layer 0 holds leaves. A node in layer l > 0 has between 0 and
/// `max_fan_in` children drawn from lower layers: uniformly from every lower
/// class when `window == 0`, otherwise from the two layers below at a
/// position within `window` of its own. With `back_edge_probability > 0` a
/// node may also point to a class of its own or a higher layer, which
/// introduces class-level cycles.
struct GeneratorConfig
{
  std::uint32_t layers = 4;
  std::uint32_t classes_per_layer = 3;
  std::uint32_t max_nodes_per_class = 3;
  std::uint32_t max_fan_in = 3;
  std::uint64_t min_cost = 1;
  std::uint64_t max_cost = 100;
  std::uint32_t window = 0;
  double back_edge_probability = 0.0;
  std::uint32_t roots = 1;
  std::uint64_t seed = 1;
};

EGraph generate_layered( GeneratorConfig const& config );

} // namespace egx
