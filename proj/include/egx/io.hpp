#pragma once

#include <egx/egraph.hpp>
#include <egx/extraction.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

namespace egx
{

class parse_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Load-time conversion of fractional costs to integer units.
struct CostScaling
{
  enum class Rounding
  {
    exact,   ///< reject any cost that is not integral after scaling
    nearest,
    up,
    down
  };

  std::int64_t multiplier = 1;
  Rounding rounding = Rounding::exact;
};

/// Reads the serialized e-graph format:
/// `{"nodes": {id: {"op", "children": [node-id...], "eclass", "cost"}}, "root_eclasses": [...]}`.
/// Children name nodes and are resolved to their e-classes. Node ids get dense
/// indexes in file order.
EGraph load_egraph( std::istream& in, CostScaling const& scaling = {} );
EGraph load_egraph_file( std::filesystem::path const& path, CostScaling const& scaling = {} );

/// Writes `egraph` in the format read by `load_egraph`. Each child class is
/// referenced through its first member node.
void store_egraph( EGraph const& egraph, std::ostream& out );

/// `{"choices": {class: node, ...}, "dag_cost": int, "valid": bool}`
void write_extraction( EGraph const& egraph, ExtractionResult const& result, std::ostream& out );

} // namespace egx
