#include "cubound/simulate.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "cubound/binomial.hpp"
#include "cubound/numeric.hpp"
#include "cubound/parallel.hpp"

namespace cubound {

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t run_index) {
  std::uint64_t z = master + (run_index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double expected_subset_min(std::span<const Counter> values, std::size_t d) {
  const auto m = values.size();
  if (d < 1 || d > m) throw ConfigError("subset size d must lie in [1, m]");
  std::vector<Counter> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // The r-th smallest value is the subset minimum for C(m-r, d-1) subsets.
  // Ties are handled because r ranges over positions, not distinct values.
  CompensatedSum total;
  for (std::size_t r = 1; r + d <= m + 1; ++r) {
    if (sorted[r - 1] == 0) continue;
    total.add(static_cast<double>(sorted[r - 1]) *
              binomial_product_ratio(m - r, d - 1, 0, 0, m, d));
  }
  return total.value();
}

void SimConfig::validate() const {
  SketchConfig{m, d};
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (mode == StreamMode::IdealHash) {
    if (stream.empty()) throw ConfigError("ideal-hash mode needs a non-empty item stream");
    if (T != stream.size()) throw ConfigError("T must equal the stream length in ideal-hash mode");
  }
  if (T < 1) throw ConfigError("horizon T must be at least 1");
  if (variant != Variant::CU && g < 1) throw ConfigError("lb/ub variants need a cap g >= 1");
}

Trajectory run_trajectory(const SimConfig& config, std::uint64_t run_index) {
  config.validate();
  const SketchConfig sketch_config(config.m, config.d);
  Rng rng(substream_seed(config.seed, run_index));
  Sketch sketch(config.m, config.variant, config.g);

  Trajectory out{CounterArray(config.m), {}, 0.0, 0};
  out.gap_trace.reserve(config.T);
  if (config.mode == StreamMode::UniformSelection) {
    UniformSelector select(sketch_config);
    for (std::uint64_t t = 0; t < config.T; ++t) {
      out.increments += sketch.update(select(rng));
      out.gap_trace.push_back(sketch.counters().gap());
    }
  } else {
    IdealHashTable<std::uint64_t> hash(sketch_config);
    for (auto item : config.stream) {
      out.increments += sketch.update(hash(item, rng));
      out.gap_trace.push_back(sketch.counters().gap());
    }
  }
  out.final_counters = sketch.counters();
  out.conditional_error = expected_subset_min(out.final_counters.values(), config.d);
  return out;
}

SimStats estimate_error(const SimConfig& config) {
  config.validate();
  const auto runs = config.runs;
  const auto levels = config.gap_levels;
  const double T = static_cast<double>(config.T);
  const double m = static_cast<double>(config.m);

  std::vector<RunRecord> records(runs);
  std::vector<std::vector<std::uint64_t>> gap_counts(chunk_count(runs, 1),
                                                     std::vector<std::uint64_t>(levels, 0));
  parallel_chunks(
      runs,
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
          const auto traj = run_trajectory(config, r);
          const auto values = traj.final_counters.values();
          const auto total = std::accumulate(values.begin(), values.end(), Counter{0});
          records[r] = {r, traj.conditional_error / T, static_cast<double>(total) / (T * m)};
          for (auto gap : traj.gap_trace)
            for (std::size_t g = 1; g <= std::min<std::size_t>(gap, levels); ++g)
              ++gap_counts[chunk][g - 1];
        }
      },
      1);

  SimStats stats;
  MeanAccumulator error, counter_rate;
  for (const auto& rec : records) {
    error.add(rec.error);
    counter_rate.add(rec.counter_rate);
  }
  stats.mean_error_rate = error.mean();
  stats.error_rate_stderr = error.stderr_of_mean();
  stats.mean_counter_rate = counter_rate.mean();
  stats.counter_rate_stderr = counter_rate.stderr_of_mean();
  stats.steps_observed = runs * config.T;
  stats.gap_fraction.assign(levels, 0.0);
  for (std::size_t g = 0; g < levels; ++g) {
    std::uint64_t hits = 0;
    for (const auto& counts : gap_counts) hits += counts[g];
    stats.gap_fraction[g] = static_cast<double>(hits) / static_cast<double>(stats.steps_observed);
  }
  if (config.keep_runs) stats.runs = std::move(records);
  return stats;
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_sim_json(std::ostream& out, const SimConfig& config, const SimStats& stats) {
  out << "{\"m\":" << config.m << ",\"d\":" << config.d << ",\"T\":" << config.T
      << ",\"runs\":" << config.runs << ",\"seed\":" << config.seed << ",\"variant\":\""
      << to_string(config.variant) << "\",\"g\":" << config.g
      << ",\"mean_error_rate\":\"" << num(stats.mean_error_rate) << "\",\"error_rate_stderr\":\""
      << num(stats.error_rate_stderr) << "\",\"mean_counter_rate\":\""
      << num(stats.mean_counter_rate) << "\",\"counter_rate_stderr\":\""
      << num(stats.counter_rate_stderr) << "\",\"gap_fraction\":[";
  for (std::size_t g = 0; g < stats.gap_fraction.size(); ++g)
    out << (g ? "," : "") << "[" << g + 1 << ",\"" << num(stats.gap_fraction[g]) << "\"]";
  out << "],\"runs_detail\":[";
  for (std::size_t i = 0; i < stats.runs.size(); ++i) {
    const auto& r = stats.runs[i];
    out << (i ? "," : "") << "[" << r.run << ",\"" << num(r.error) << "\",\""
        << num(r.counter_rate) << "\"]";
  }
  out << "]}\n";
}

void write_sim_csv(std::ostream& out, const SimStats& stats) {
  out << "run,error,counter_rate\n";
  for (const auto& r : stats.runs)
    out << r.run << ',' << num(r.error) << ',' << num(r.counter_rate) << '\n';
  out << "\ng,fraction\n";
  for (std::size_t g = 0; g < stats.gap_fraction.size(); ++g)
    out << g + 1 << ',' << num(stats.gap_fraction[g]) << '\n';
}

SandwichReport sandwich_trace(std::size_t m, std::size_t d, std::uint64_t g, std::uint64_t T,
                              std::uint64_t seed) {
  const SketchConfig config(m, d);
  if (g < 1) throw ConfigError("gap cap g must be at least 1");
  Rng rng(substream_seed(seed, 0));
  UniformSelector select(config);

  // Ordered from smallest to largest.
  std::vector<Sketch> chain;
  chain.emplace_back(m, Variant::LB, g);
  chain.emplace_back(m, Variant::LB, g + 1);
  chain.emplace_back(m, Variant::CU);
  chain.emplace_back(m, Variant::UB, g + 1);
  chain.emplace_back(m, Variant::UB, g);
  static const char* kPairs[] = {"lb(g) <= lb(g+1)", "lb(g+1) <= cu", "cu <= ub(g+1)",
                                 "ub(g+1) <= ub(g)"};

  SandwichReport report;
  for (std::uint64_t t = 1; t <= T; ++t) {
    const auto s = select(rng);
    for (auto& sk : chain) sk.update(s);
    for (std::size_t p = 0; p + 1 < chain.size(); ++p) {
      const auto lo = chain[p].counters().values();
      const auto hi = chain[p + 1].counters().values();
      for (std::size_t c = 0; c < m; ++c) {
        if (lo[c] > hi[c]) {
          report.ok = false;
          report.all_identical = false;
          report.violation = SandwichViolation{t, c, kPairs[p]};
          return report;
        }
        if (lo[c] != hi[c]) report.all_identical = false;
      }
    }
  }
  return report;
}

ProbeReport worst_case_probe(std::size_t m, std::size_t d, std::span<const std::uint64_t> stream,
                             std::uint64_t runs, std::uint64_t seed) {
  const SketchConfig config(m, d);
  if (stream.empty()) throw ConfigError("probe stream must not be empty");
  if (runs < 1) throw ConfigError("runs must be at least 1");

  // Distinct items in order of first appearance, with their counts.
  std::vector<std::uint64_t> items;
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  for (auto item : stream)
    if (counts[item]++ == 0) items.push_back(item);

  MeanAccumulator absent;
  std::vector<MeanAccumulator> present(items.size()), diff(items.size());
  for (std::uint64_t r = 0; r < runs; ++r) {
    Rng rng(substream_seed(seed, r));
    IdealHashTable<std::uint64_t> hash(config);
    CounterArray counters(m);
    for (auto item : stream) counters.cu_update(hash(item, rng));
    // The absent item's set is a fresh uniform d-subset, so its expected
    // error given the counters is the expected subset minimum.
    const double absent_error = expected_subset_min(counters.values(), d);
    absent.add(absent_error);
    for (std::size_t i = 0; i < items.size(); ++i) {
      const double e = static_cast<double>(counters.query(hash(items[i], rng))) -
                       static_cast<double>(counts[items[i]]);
      present[i].add(e);
      diff[i].add(e - absent_error);
    }
  }

  ProbeReport report;
  report.absent_mean = absent.mean();
  report.absent_stderr = absent.stderr_of_mean();
  for (std::size_t i = 0; i < items.size(); ++i) {
    ItemError ie{items[i], counts[items[i]], present[i].mean(), diff[i].stderr_of_mean(),
                 diff[i].mean()};
    if (ie.mean_diff > 3.0 * ie.stderr_diff + 1e-12) report.ok = false;
    report.items.push_back(ie);
  }
  return report;
}

std::vector<double> gap_tail_probe(std::size_t m, std::uint64_t T, std::uint64_t seed,
                                   std::size_t levels) {
  if (m < 3) throw ConfigError("gap tail probe needs m >= 3");
  SimConfig config;
  config.m = m;
  config.d = m - 1;
  config.T = T;
  config.seed = seed;
  config.gap_levels = levels;
  const auto traj = run_trajectory(config, 0);
  std::vector<double> fraction(levels, 0.0);
  for (auto gap : traj.gap_trace)
    for (std::size_t g = 1; g <= std::min<std::size_t>(gap, levels); ++g) fraction[g - 1] += 1.0;
  for (auto& f : fraction) f /= static_cast<double>(T);
  return fraction;
}

namespace {

std::vector<std::vector<std::uint32_t>> all_subsets(std::size_t m, std::size_t d) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> pick(d);
  std::iota(pick.begin(), pick.end(), 0u);
  while (true) {
    out.push_back(pick);
    std::size_t i = d;
    while (i > 0 && pick[i - 1] == m - d + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

uint128 gcd128(uint128 a, uint128 b) {
  while (b != 0) {
    const uint128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

OracleResult brute_force_expected_error(std::size_t m, std::size_t d, std::uint64_t T,
                                        Variant variant, std::uint64_t g) {
  const SketchConfig config(m, d);
  if (T < 1) throw ConfigError("horizon T must be at least 1");
  const Sketch root(m, variant, g);
  const auto subsets = all_subsets(m, d);
  const std::uint64_t n_subsets = subsets.size();

  std::uint64_t leaves = 1;
  for (std::uint64_t t = 0; t < T && n_subsets > 1; ++t) {
    if (leaves > kOracleLeafLimit / n_subsets)
      throw SizeError("C(m,d)^T exceeds the enumeration guard of 1e6 sequences");
    leaves *= n_subsets;
  }

  // Integer weights: the r-th smallest counter is the minimum of an absent
  // item's set for C(m-r, d-1) of the C(m, d) sets.
  std::vector<uint128> weight(m, 0);
  for (std::size_t r = 1; r + d <= m + 1; ++r) weight[r - 1] = *binomial_exact(m - r, d - 1);
  auto leaf_value = [&](const Sketch& sketch) {
    const auto values = sketch.counters().values();
    std::vector<Counter> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    uint128 v = 0;
    for (std::size_t r = 0; r < m; ++r) v += weight[r] * sorted[r];
    return v;
  };

  std::vector<SelectionSet> selections;
  selections.reserve(n_subsets);
  for (const auto& s : subsets) selections.emplace_back(config, s);

  uint128 numerator = 0;
  if (n_subsets == 1) {
    auto sketch = root;
    for (std::uint64_t t = 0; t < T; ++t) sketch.update(selections[0]);
    numerator = leaf_value(sketch);
  } else {
    auto descend = [&](auto&& self, const Sketch& sketch, std::uint64_t depth) -> void {
      if (depth == T) {
        numerator += leaf_value(sketch);
        return;
      }
      for (const auto& s : selections) {
        auto next = sketch;
        next.update(s);
        self(self, next, depth + 1);
      }
    };
    descend(descend, root, 0);
  }

  uint128 denominator = static_cast<uint128>(leaves) * n_subsets;
  const auto common = gcd128(numerator, denominator);
  if (common > 1) {
    numerator /= common;
    denominator /= common;
  }
  OracleResult out;
  out.m = m;
  out.d = d;
  out.T = T;
  out.variant = variant;
  out.g = g;
  out.numerator = static_cast<std::uint64_t>(numerator);
  out.denominator = static_cast<std::uint64_t>(denominator);
  return out;
}

}  // namespace cubound
