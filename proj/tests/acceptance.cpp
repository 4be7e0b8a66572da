// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. `--slow` adds the g = 4, 5 rows of the m=50, d=4, T=250 table.
// Positional arguments select criteria by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cubound/bounds.hpp"
#include "cubound/closed_form.hpp"
#include "cubound/simulate.hpp"

using namespace cubound;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = true;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void note(const std::string& line) { std::printf("    %s\n", line.c_str()); }

bool slow = false;

// m=50, d=4, T=250.
Outcome reference_rows() {
  struct Row {
    std::size_t g;
    double lower, upper;
  };
  std::vector<Row> rows = {{1, 0.01860, 0.07654}, {2, 0.02956, 0.04090}, {3, 0.03420, 0.03637}};
  if (slow) rows.insert(rows.end(), {{4, 0.03540, 0.03572}, {5, 0.03559, 0.03562}});
  Outcome out;
  int misses = 0;
  for (const auto& row : rows) {
    const auto start = Clock::now();
    const StateSpace space(ChainParams{50, 4, row.g});
    double got[2], shifted[2];
    for (int i = 0; i < 2; ++i) {
      const auto kernel = build_kernel(space, i == 0 ? Variant::LB : Variant::UB);
      got[i] = expected_error(kernel, space, 250);
      shifted[i] = expected_error(kernel, space, 250, 1);
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const double want[2] = {row.lower, row.upper};
    for (int i = 0; i < 2; ++i) {
      const double dev = got[i] - want[i];
      const bool ok = std::abs(dev) <= 1e-4;
      if (!ok) ++misses;
      note(fmt("g=%zu %s: %.6f vs %.5f (deviation %+.2e) %s; steps 1..T sum %.6f", row.g,
               i == 0 ? "lower" : "upper", got[i], want[i], dev, ok ? "ok" : "MISS", shifted[i]));
    }
    note(fmt("g=%zu: %zu states, %.2f s", row.g, space.size(), secs));
  }
  // Independent check of which summation is the expected error: simulate the
  // g=1 upper-bound sketch itself.
  SimConfig sim;
  sim.m = 50;
  sim.d = 4;
  sim.T = 250;
  sim.runs = 20000;
  sim.seed = 1;
  sim.variant = Variant::UB;
  sim.g = 1;
  const auto stats = estimate_error(sim);
  note(fmt("simulated g=1 upper sketch: %.5f +/- %.5f (runs=%llu)", stats.mean_error_rate,
           stats.error_rate_stderr, static_cast<unsigned long long>(sim.runs)));
  out.passed = misses == 0;
  out.detail = fmt("%d of %zu values outside 1e-4", misses, 2 * rows.size());
  return out;
}

Outcome oracle_equivalence() {
  Outcome out;
  double worst = 0.0;
  for (std::size_t m : {3, 4})
    for (std::uint64_t T : {1, 2, 3}) {
      const double exact = brute_force_expected_error(m, 2, T).value() / static_cast<double>(T);
      for (auto variant : {Variant::LB, Variant::UB}) {
        const double got = expected_error(m, 2, T, T, variant);
        worst = std::max(worst, std::abs(got - exact));
        if (std::abs(got - exact) > 1e-10) {
          out.passed = false;
          note(fmt("m=%zu T=%llu %s: %.15g vs %.15g", m, static_cast<unsigned long long>(T),
                   to_string(variant).data(), got, exact));
        }
      }
    }
  const auto one = brute_force_expected_error(3, 2, 1);
  const auto two = brute_force_expected_error(3, 2, 2);
  const bool exact_ok = one.numerator == 1 && one.denominator == 3 && two.numerator == 8 &&
                        two.denominator == 9 &&
                        std::abs(expected_error(3, 2, 1, 1, Variant::LB) - 1.0 / 3.0) <= 1e-15 &&
                        std::abs(expected_error(3, 2, 2, 2, Variant::UB) - 4.0 / 9.0) <= 1e-15;
  if (!exact_ok) out.passed = false;
  out.detail = fmt("12 comparisons, max deviation %.2e; T=1 -> %llu/%llu, T=2 -> %llu/%llu over T",
                   worst, static_cast<unsigned long long>(one.numerator),
                   static_cast<unsigned long long>(one.denominator),
                   static_cast<unsigned long long>(two.numerator),
                   static_cast<unsigned long long>(two.denominator));
  return out;
}

Outcome monotone_squeeze() {
  Outcome out;
  const auto start = Clock::now();
  double prev_lo = -1.0, prev_hi = 2.0;
  for (std::size_t g = 1; g <= 5; ++g) {
    const double lo = expected_error(10, 3, g, 20, Variant::LB);
    const double hi = expected_error(10, 3, g, 20, Variant::UB);
    note(fmt("g=%zu: [%.8f, %.8f]", g, lo, hi));
    if (!(lo > prev_lo) || !(hi < prev_hi) || !(lo <= hi)) out.passed = false;
    prev_lo = lo;
    prev_hi = hi;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (secs >= 30.0) out.passed = false;
  out.detail = fmt("g = 1..5 strictly squeezing, %.2f s", secs);
  return out;
}

Outcome closed_form_agreement() {
  Outcome out;
  double worst = 0.0;
  for (std::size_t m = 3; m <= 20; ++m) {
    const auto [lo, hi] = closed_form::g1_asymptotic(m);
    const double got_lo = asymptotic_error(m, m - 1, 1, Variant::LB).value;
    const double got_hi = asymptotic_error(m, m - 1, 1, Variant::UB).value;
    worst = std::max({worst, std::abs(got_lo - lo), std::abs(got_hi - hi)});
  }
  const double r_lo = asymptotic_error(3, 2, 1, Variant::LB).value;
  const double r_hi = asymptotic_error(3, 2, 1, Variant::UB).value;
  const bool regression = std::abs(r_lo - 0.4) <= 1e-10 && std::abs(r_hi - 0.6) <= 1e-10;
  out.passed = worst <= 1e-10 && regression;
  out.detail = fmt("m = 3..20, max deviation %.2e; m=3 gives (%.12f, %.12f)", worst, r_lo, r_hi);
  return out;
}

Outcome birth_death_trajectory() {
  Outcome out;
  const auto start = Clock::now();
  SimConfig config;
  config.m = 10;
  config.d = 9;
  config.T = 100000;
  config.runs = 1;
  config.seed = 1;
  const auto stats = estimate_error(config);
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  out.passed = std::abs(stats.mean_error_rate - 0.5) <= 0.01 &&
               std::abs(stats.mean_counter_rate - 0.5) <= 0.01 && secs < 60.0;
  note(fmt("error rate %.5f, counter rate %.5f", stats.mean_error_rate, stats.mean_counter_rate));
  for (std::uint64_t g = 1; g <= 4; ++g) {
    const double p = closed_form::bd_gap_tail(10, g);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(config.T));
    const double got = stats.gap_fraction[g - 1];
    const bool ok = std::abs(got - p) <= 3.0 * se;
    if (!ok) out.passed = false;
    note(fmt("gap >= %llu: %.5f vs %.5f (%+.2f se) %s", static_cast<unsigned long long>(g), got,
             p, (got - p) / se, ok ? "ok" : "MISS"));
  }
  out.detail = fmt("one trajectory, T=1e5, %.2f s", secs);
  return out;
}

Outcome pathwise_sandwich() {
  Outcome out;
  Rng rng(2024);
  int identical = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, m)(rng);
    const std::uint64_t g = std::uniform_int_distribution<std::uint64_t>(1, 3)(rng);
    const std::uint64_t T = std::uniform_int_distribution<std::uint64_t>(1, 50)(rng);
    const auto r = sandwich_trace(m, d, g, T, rng());
    if (r.all_identical) ++identical;
    if (!r.ok) {
      out.passed = false;
      note(fmt("m=%zu d=%zu g=%llu T=%llu: %s at step %llu, counter %zu", m, d,
               static_cast<unsigned long long>(g), static_cast<unsigned long long>(T),
               r.violation->pair.c_str(), static_cast<unsigned long long>(r.violation->step),
               r.violation->counter));
    }
  }
  out.detail = fmt("1000 configurations, %d with all five arrays identical throughout", identical);
  return out;
}

CounterArray realize(std::span<const std::uint32_t> k) {
  std::vector<Counter> values;
  for (std::size_t l = 0; l < k.size(); ++l) values.insert(values.end(), k[l], l);
  return CounterArray::from_values(std::move(values));
}

Outcome kernel_soundness() {
  Outcome out;
  std::size_t spaces = 0, rows = 0;
  for (std::size_t m = 2; m <= 12; ++m)
    for (std::size_t d = 1; d <= m; ++d)
      for (std::size_t g = 1; g <= 4; ++g) {
        const ChainParams params{m, d, g};
        const StateSpace space(params);
        if (space.size() != state_count(params)) {
          out.passed = false;
          note(fmt("m=%zu d=%zu g=%zu: %zu states", m, d, g, space.size()));
        }
        for (auto variant : {Variant::LB, Variant::UB}) {
          const auto kernel = build_kernel(space, variant);
          for (std::size_t i = 0; i < kernel.rows(); ++i, ++rows) {
            double sum = 0.0;
            bool ok = true;
            for (const auto& e : kernel.row(i)) {
              sum += e.p;
              ok = ok && e.beta >= 0.0 && e.beta <= 1.0 &&
                   is_member(space.state(e.target), params);
            }
            if (!ok || std::abs(sum - 1.0) > 1e-12) {
              out.passed = false;
              note(fmt("m=%zu d=%zu g=%zu %s row %zu: sum %.17g", m, d, g,
                       to_string(variant).data(), i, sum));
            }
          }
        }
        ++spaces;
      }

  // Empirical one-step events from counter arrays realizing random states.
  // The capped sketches are stepped too, and their new offset histogram must
  // be the kernel's successor.
  Rng rng(31337);
  const std::uint64_t draws = 20000;
  std::size_t compared = 0;
  double worst_z = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = std::uniform_int_distribution<std::size_t>(4, 9)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, m - 1)(rng);
    const std::size_t g = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const ChainParams params{m, d, g};
    const StateSpace space(params);
    const auto index = std::uniform_int_distribution<std::size_t>(0, space.size() - 1)(rng);
    const auto k = space.state(static_cast<StateSpace::Index>(index));
    const auto counters = realize(k);
    UniformSelector pick(SketchConfig(m, d));

    std::vector<std::vector<std::uint64_t>> hits(g + 1, std::vector<std::uint64_t>(d + 1, 0));
    for (std::uint64_t n = 0; n < draws; ++n) {
      const auto s = pick(rng);
      const std::size_t v = counters.query(s);
      std::size_t c = 0;
      for (auto u : s) c += counters[u] == v;
      ++hits[v][c];
      for (auto variant : {Variant::LB, Variant::UB}) {
        CappedSketch sk(counters, g, variant);
        sk.update(s);
        auto next = sk.counters().delta();
        next.resize(g + 1, 0);
        const auto expect =
            variant == Variant::LB ? gamma_lb(k, v, c, params) : gamma_ub(k, v, c, params);
        if (next != expect) {
          out.passed = false;
          note(fmt("m=%zu d=%zu g=%zu state %zu: %s successor differs for (v=%zu, c=%zu)", m, d,
                   g, index, to_string(variant).data(), v, c));
          return out;
        }
      }
    }
    for (std::size_t v = 0; v <= g; ++v)
      for (std::size_t c = 1; c <= d; ++c) {
        const double p = c <= k[v] ? transition_prob(k, v, c, params) : 0.0;
        const double freq = static_cast<double>(hits[v][c]) / static_cast<double>(draws);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
        if (p == 0.0 || p == 1.0) {
          if (freq != p) out.passed = false;
          continue;
        }
        ++compared;
        const double z = std::abs(freq - p) / se;
        worst_z = std::max(worst_z, z);
        if (z > 3.0) {
          out.passed = false;
          note(fmt("m=%zu d=%zu g=%zu state %zu (v=%zu, c=%zu): %.5f vs %.5f (%.2f se)", m, d, g,
                   index, v, c, freq, p, z));
        }
      }
  }
  out.detail = fmt("%zu spaces, %zu rows; 10 states, %zu event frequencies, worst %.2f se",
                   spaces, rows, compared, worst_z);
  return out;
}

Outcome worst_case_probe_streams() {
  Outcome out;
  constexpr std::size_t T = 200;
  std::vector<std::pair<std::string, std::vector<std::uint64_t>>> streams;
  streams.emplace_back("constant", std::vector<std::uint64_t>(T, 0));
  std::vector<std::uint64_t> s;
  for (std::size_t t = 0; t < T; ++t) s.push_back(t % 2);
  streams.emplace_back("alternating", s);
  s.clear();
  {
    // Zipf(1.1) over 1000 items.
    std::vector<double> w(1000);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / std::pow(i + 1.0, 1.1);
    std::discrete_distribution<std::uint64_t> zipf(w.begin(), w.end());
    Rng rng(7);
    for (std::size_t t = 0; t < T; ++t) s.push_back(zipf(rng));
  }
  streams.emplace_back("zipf", s);
  s.clear();
  for (std::size_t t = 0; t < T; ++t) s.push_back(t);
  streams.emplace_back("distinct", s);
  s.clear();
  for (std::size_t t = 0; t < T; ++t) s.push_back(t % (T / 2));
  streams.emplace_back("half-repeats", s);

  std::uint64_t seed = 100;
  for (const auto& [name, stream] : streams) {
    const auto r = worst_case_probe(20, 3, stream, 2000, seed++);
    double worst_mean = -1.0, worst_z = -1e300;
    for (const auto& it : r.items) {
      worst_mean = std::max(worst_mean, it.mean);
      if (it.stderr_diff > 0) worst_z = std::max(worst_z, it.mean_diff / it.stderr_diff);
    }
    std::set<std::uint64_t> distinct(stream.begin(), stream.end());
    note(fmt("%-12s %3zu items: absent %.4f +/- %.4f, worst present %.4f, worst paired z %s %s",
             name.c_str(), distinct.size(), r.absent_mean, r.absent_stderr, worst_mean,
             worst_z > -1e300 ? fmt("%.2f", worst_z).c_str() : "n/a", r.ok ? "ok" : "MISS"));
    if (!r.ok) out.passed = false;
  }
  out.detail = "m=20 d=3 T=200 runs=2000, five streams";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--slow") == 0)
      slow = true;
    else
      only.insert(std::atoi(argv[i]));
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "reference rows m=50 d=4 T=250 within 1e-4", reference_rows},
      {2, "oracle equivalence for g = T", oracle_equivalence},
      {3, "monotone squeeze m=10 d=3 T=20", monotone_squeeze},
      {4, "closed-form limits for d = m-1, g = 1", closed_form_agreement},
      {5, "birth-death trajectory m=10 d=9", birth_death_trajectory},
      {6, "pathwise sandwich", pathwise_sandwich},
      {7, "kernel soundness and empirical events", kernel_soundness},
      {8, "present items never beat the absent item", worst_case_probe_streams},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.contains(c.id)) continue;
    std::printf("criterion %d: %s\n", c.id, c.name);
    std::fflush(stdout);
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("%s criterion %d: %s\n", o.passed ? "PASS" : "FAIL", c.id, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
