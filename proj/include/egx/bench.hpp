#pragma once

#include <egx/pipeline.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace egx
{

/// One entry of a methods spec such as `greedy+parallel(8)+hybrid(1.25)+exact`.
struct MethodConfig
{
  Mode mode = Mode::greedy;
  std::optional<Rational> theta; ///< hybrid only
  unsigned workers = 1;
  std::string label;
};

/// Parses `+`-separated methods: `greedy`, `parallel(N)`, `exact`,
/// `hybrid(THETA)` or `hybrid(THETA,N)`. Throws `std::invalid_argument`.
std::vector<MethodConfig> parse_methods( std::string_view spec );

/// Signed exact ratio, reduced, positive denominator.
struct Gap
{
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>( num ) / static_cast<double>( den ); }
  std::string to_string() const;
  friend bool operator==( Gap const&, Gap const& ) = default;
};

/// (final - bks) / (h - bks). Undefined (nullopt) when `final` is infinite,
/// or when h == bks and final != bks.
std::optional<Gap> normalized_gap( Cost final_cost, Cost h, Cost bks );

struct GapRecord
{
  std::string benchmark;
  std::string method;
  std::optional<Rational> theta;
  unsigned workers = 1;
  double wall_time = 0.0;
  Cost final_cost = Cost::infinity();
  Cost h = Cost::infinity();
  Cost bks = Cost::infinity();
  bool bks_provisional = false;
  std::optional<Gap> alpha;
  std::string status;
  /// Exact-solver incumbents as (seconds, cost); empty for greedy methods.
  std::vector<std::pair<double, Cost>> incumbents;
};

struct SuiteOptions
{
  double time_limit = 60.0;
  DedupLevel dedup = DedupLevel::on;
  /// Benchmarks run concurrently on this many threads; methods of one
  /// benchmark always run one after another.
  unsigned jobs = 1;
};

/// Runs every method on every benchmark. The benchmark name is the file
/// stem. H is the sequential greedy DAG cost after deduplication. Missing
/// BKS entries fall back to the best cost seen in this run (flagged
/// provisional). Records are ordered by benchmark name, then method order.
std::vector<GapRecord> run_suite( std::vector<std::filesystem::path> const& corpus,
                                  std::vector<MethodConfig> const& methods,
                                  std::map<std::string, std::uint64_t> const& bks,
                                  SuiteOptions const& options = {} );

/// `*.json` files directly inside `dir`, sorted.
std::vector<std::filesystem::path> list_corpus( std::filesystem::path const& dir );

/// JSON object mapping benchmark name to integer cost.
std::map<std::string, std::uint64_t> load_bks( std::filesystem::path const& path );

/// Header `benchmark,method,theta,workers,wall_time_s,cost,H,BKS,alpha,status`.
void write_csv( std::vector<GapRecord> const& records, std::ostream& out );

/// For each record with incumbents, the first time each alpha target in
/// {1, 1/2, 1/4, 1/10, 1/20, 0} was reached: `benchmark,method,alpha_target,time_s`.
void write_curves( std::vector<GapRecord> const& records, std::ostream& out );

} // namespace egx
