#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubound/sketch.hpp"

namespace cubound {

/// Seed for run `run_index` of a simulation seeded with `master`: splitmix64
/// applied to master + (run_index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t run_index);

/// E[min over a uniform d-subset of the counters], exactly:
/// sum_{r=1}^{m-d+1} y_(r) C(m-r, d-1) / C(m, d) over ascending y.
double expected_subset_min(std::span<const Counter> values, std::size_t d);

enum class StreamMode { UniformSelection, IdealHash };

struct SimConfig {
  std::size_t m = 0;
  std::size_t d = 0;
  std::uint64_t T = 0;
  std::uint64_t runs = 1;
  std::uint64_t seed = 0;
  Variant variant = Variant::CU;
  std::uint64_t g = 0;  // gap cap for LB/UB
  StreamMode mode = StreamMode::UniformSelection;
  std::vector<std::uint64_t> stream;  // item sequence for IdealHash; T = stream.size()
  std::size_t gap_levels = 10;        // histogram thresholds 1..gap_levels
  bool keep_runs = false;

  void validate() const;
};

struct Trajectory {
  CounterArray final_counters;
  std::vector<Counter> gap_trace;  // G(t) for t = 1..T
  double conditional_error = 0.0;  // E[e*(T) | Y(T)]
  std::uint64_t increments = 0;
};

/// Drives one run of the configured variant for T steps.
Trajectory run_trajectory(const SimConfig& config, std::uint64_t run_index);

struct RunRecord {
  std::uint64_t run;
  double error;         // conditional error / T
  double counter_rate;  // sum Y(T) / (T m)
};

struct SimStats {
  double mean_error_rate = 0.0;
  double error_rate_stderr = 0.0;
  double mean_counter_rate = 0.0;
  double counter_rate_stderr = 0.0;
  /// gap_fraction[g-1] = fraction of steps with G(t) >= g, over all runs.
  std::vector<double> gap_fraction;
  std::uint64_t steps_observed = 0;
  std::vector<RunRecord> runs;  // filled when keep_runs is set
};

SimStats estimate_error(const SimConfig& config);

void write_sim_json(std::ostream& out, const SimConfig& config, const SimStats& stats);
/// `run,error,counter_rate` rows, a blank line, then `g,fraction` rows.
void write_sim_csv(std::ostream& out, const SimStats& stats);

/// First ordering violation found by sandwich_trace.
struct SandwichViolation {
  std::uint64_t step;
  std::size_t counter;
  std::string pair;  // e.g. "lb(g) <= lb(g+1)"
};

struct SandwichReport {
  bool ok = true;
  bool all_identical = true;  // all five arrays equal at every step
  std::optional<SandwichViolation> violation;
};

/// Runs LB(g), LB(g+1), CU, UB(g+1), UB(g) on one shared selection sequence
/// and checks LB(g) <= LB(g+1) <= CU <= UB(g+1) <= UB(g) element-wise.
SandwichReport sandwich_trace(std::size_t m, std::size_t d, std::uint64_t g, std::uint64_t T,
                              std::uint64_t seed);

struct ItemError {
  std::uint64_t item;
  std::uint64_t count;  // occurrences in the stream
  double mean;          // mean of e_i(T) over runs
  double stderr_diff;   // standard error of the paired difference to the absent item
  double mean_diff;     // mean of e_i(T) - E[e*(T, r) | Y(T)]
};

struct ProbeReport {
  double absent_mean = 0.0;
  double absent_stderr = 0.0;
  std::vector<ItemError> items;
  bool ok = true;  // every item: mean_diff <= 3 * stderr_diff
};

/// Ideal-hash CU over `stream`, re-hashed each run; compares each present
/// item's error with the absent-item error of the same run.
ProbeReport worst_case_probe(std::size_t m, std::size_t d, std::span<const std::uint64_t> stream,
                             std::uint64_t runs, std::uint64_t seed);

/// Fraction of steps with G(t) >= g, g = 1..levels, along one CU trajectory
/// with d = m - 1.
std::vector<double> gap_tail_probe(std::size_t m, std::uint64_t T, std::uint64_t seed,
                                   std::size_t levels = 10);

struct OracleResult {
  std::size_t m = 0, d = 0;
  std::uint64_t T = 0;
  Variant variant = Variant::CU;
  std::uint64_t g = 0;
  /// E[e*(T)] = numerator / denominator, in lowest terms.
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

inline constexpr std::uint64_t kOracleLeafLimit = 1'000'000;

/// Exact E[e*(T)] by enumerating all C(m,d)^T selection sequences. CU by
/// default; with an LB/UB variant and cap g, the expected error of that
/// capped sketch. Throws SizeError above kOracleLeafLimit sequences.
OracleResult brute_force_expected_error(std::size_t m, std::size_t d, std::uint64_t T,
                                        Variant variant = Variant::CU, std::uint64_t g = 0);

}  // namespace cubound
