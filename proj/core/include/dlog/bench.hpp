#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dlog/solvers.hpp"

namespace dlog {

enum class Algorithm { kDic, kDicParallel, kIc, kBsgs, kRho, kPh };

const char* to_string(Algorithm alg);
Algorithm parse_algorithm(std::string_view name);  // throws std::invalid_argument

struct BenchConfig {
  std::vector<unsigned> bits_list;
  std::vector<double> multipliers;
  std::vector<Algorithm> algorithms;
  std::uint32_t trials = 20;
  std::uint64_t seed = 0;
  SolveOptions budgets;
  std::map<Algorithm, BoundFormula> bound_formula;  // default kSqrtHalf per algorithm
  unsigned jobs = 1;
};

struct BenchRecord {
  std::string algorithm;
  unsigned bits = 0;
  double multiplier = 0.0;
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  Int p, g, b, x_expected, x_found;
  bool success = false;
  std::uint64_t elapsed_ms = 0;
  std::uint64_t candidates_tested = 0;
  std::uint64_t smooth_found = 0;
  std::uint64_t rounds = 0;

  bool operator==(const BenchRecord&) const = default;
};

// p = random prime of `bits` bits, g = smallest generator, x uniform in
// [1, p-2], b = g^x. Deterministic per seed; expected_x is set.
DlpInstance gen_instance(unsigned bits, std::uint64_t seed);

// Runs the full bits x multipliers x algorithms x trials grid. Per-cell
// seeds are derived from (config.seed, bits, multiplier, algorithm, trial),
// so reordering or subsetting the grid never changes an individual trial.
// Failures are recorded with success=false; the sweep never aborts. Records
// come back in deterministic grid order.
std::vector<BenchRecord> run_sweep(const BenchConfig& config);

// Header: algorithm,bits,multiplier,trial,seed,p,g,b,x_expected,x_found,
// success,elapsed_ms,candidates_tested,smooth_found,rounds. LF newlines.
std::string emit_csv(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> parse_csv(std::string_view text);  // throws on malformed input

// Standalone SVG line chart of the per-(series, x) mean of a numeric field.
// x_field: bits | multiplier | trial; y_aggregate: mean_elapsed (or
// mean_candidates, mean_smooth, mean_rounds); series_field names the field
// whose distinct values become lines.
std::string emit_svg_plot(const std::vector<BenchRecord>& records, std::string_view x_field,
                          std::string_view y_aggregate, std::string_view series_field,
                          bool log_y = false);

}  // namespace dlog
