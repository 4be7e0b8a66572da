#include "cubound/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>

#include "cubound/bounds.hpp"
#include "cubound/closed_form.hpp"
#include "cubound/simulate.hpp"

namespace cubound {

namespace {

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

class Checker {
 public:
  explicit Checker(const VerifyOptions& options) : options_(options) {}

  TransitionKernel kernel(const StateSpace& space, Variant variant) const {
    const auto& custom = variant == Variant::LB ? options_.lb_formulas : options_.ub_formulas;
    return custom ? build_kernel(space, variant, *custom) : build_kernel(space, variant);
  }

  double error(std::size_t m, std::size_t d, std::size_t g, std::uint64_t T,
               Variant variant) const {
    const StateSpace space(ChainParams{m, d, g});
    return expected_error(kernel(space, variant), space, T);
  }

  double limit(std::size_t m, std::size_t d, std::size_t g, Variant variant) const {
    const StateSpace space(ChainParams{m, d, g});
    return asymptotic_error(kernel(space, variant), space).value;
  }

  bool full() const { return options_.level == VerifyLevel::Full; }
  std::uint64_t seed() const { return options_.seed; }

 private:
  const VerifyOptions& options_;
};

CheckResult oracle_equivalence(const Checker& ck) {
  CheckResult r{"oracle equivalence (g = T)", true, "", 0.0};
  double worst = 0.0;
  for (std::size_t m : {3, 4})
    for (std::uint64_t T : {1, 2, 3}) {
      const double exact = brute_force_expected_error(m, 2, T).value() / static_cast<double>(T);
      for (auto variant : {Variant::LB, Variant::UB}) {
        const double got = ck.error(m, 2, T, T, variant);
        worst = std::max(worst, std::abs(got - exact));
        if (std::abs(got - exact) > 1e-10) {
          r.passed = false;
          r.detail = fmt("m=%zu T=%llu %s: %.12g vs oracle %.12g", m,
                         static_cast<unsigned long long>(T), to_string(variant).data(), got, exact);
          return r;
        }
      }
    }
  r.detail = fmt("max deviation %.3g", worst);
  return r;
}

// For g < T the chains are compared against full enumeration of the capped
// sketches themselves, which exercises the frozen and boost events.
CheckResult capped_oracle(const Checker& ck) {
  CheckResult r{"capped sketches vs enumeration (g < T)", true, "", 0.0};
  struct Case {
    std::size_t m, d;
    std::uint64_t T;
  };
  double worst = 0.0;
  std::size_t compared = 0;
  for (auto c : {Case{3, 2, 5}, Case{4, 2, 4}, Case{4, 3, 5}, Case{5, 3, 3}, Case{5, 2, 3}})
    for (std::uint64_t g = 1; g < c.T; ++g)
      for (auto variant : {Variant::LB, Variant::UB}) {
        const double exact = brute_force_expected_error(c.m, c.d, c.T, variant, g).value() /
                             static_cast<double>(c.T);
        const double got = ck.error(c.m, c.d, g, c.T, variant);
        worst = std::max(worst, std::abs(got - exact));
        ++compared;
        if (std::abs(got - exact) > 1e-10) {
          r.passed = false;
          r.detail = fmt("m=%zu d=%zu g=%llu T=%llu %s: %.12g vs enumeration %.12g", c.m, c.d,
                         static_cast<unsigned long long>(g), static_cast<unsigned long long>(c.T),
                         to_string(variant).data(), got, exact);
          return r;
        }
      }
  r.detail = fmt("%zu comparisons, max deviation %.3g", compared, worst);
  return r;
}

CheckResult kernel_soundness(const Checker& ck) {
  CheckResult r{"kernel soundness", true, "", 0.0};
  const std::size_t max_m = ck.full() ? 12 : 8;
  const std::size_t max_g = ck.full() ? 4 : 3;
  std::size_t spaces = 0;
  for (std::size_t m = 2; m <= max_m; ++m)
    for (std::size_t d = 1; d <= m; ++d)
      for (std::size_t g = 1; g <= max_g; ++g) {
        const ChainParams params{m, d, g};
        const StateSpace space(params);
        if (space.size() != state_count(params)) {
          r.passed = false;
          r.detail = fmt("m=%zu d=%zu g=%zu: %zu states", m, d, g, space.size());
          return r;
        }
        for (auto variant : {Variant::LB, Variant::UB}) {
          const auto kernel = ck.kernel(space, variant);
          for (std::size_t i = 0; i < kernel.rows(); ++i) {
            double sum = 0.0;
            for (const auto& e : kernel.row(i)) {
              sum += e.p;
              if (e.p < 0.0 || e.p > 1.0 || e.beta < 0.0 || e.beta > 1.0 ||
                  !is_member(space.state(e.target), params)) {
                r.passed = false;
                r.detail = fmt("m=%zu d=%zu g=%zu %s row %zu: p=%g beta=%g", m, d, g,
                               to_string(variant).data(), i, e.p, e.beta);
                return r;
              }
            }
            if (std::abs(sum - 1.0) > 1e-12) {
              r.passed = false;
              r.detail = fmt("m=%zu d=%zu g=%zu %s row %zu sums to %.17g", m, d, g,
                             to_string(variant).data(), i, sum);
              return r;
            }
          }
        }
        ++spaces;
      }
  r.detail = fmt("%zu state spaces", spaces);
  return r;
}

CheckResult closed_form_vs_chain(const Checker& ck) {
  CheckResult r{"g=1, d=m-1 limits vs closed form", true, "", 0.0};
  for (std::size_t m = 3; m <= 20; ++m) {
    const auto [lo, hi] = closed_form::g1_asymptotic(m);
    const double got_lo = ck.limit(m, m - 1, 1, Variant::LB);
    const double got_hi = ck.limit(m, m - 1, 1, Variant::UB);
    if (std::abs(got_lo - lo) > 1e-10 || std::abs(got_hi - hi) > 1e-10) {
      r.passed = false;
      r.detail = fmt("m=%zu: (%.12g, %.12g) vs (%.12g, %.12g)", m, got_lo, got_hi, lo, hi);
      return r;
    }
  }
  r.detail = "m = 3..20";
  return r;
}

CheckResult monotone_squeeze(const Checker& ck) {
  CheckResult r{"monotone squeeze m=10 d=3 T=20", true, "", 0.0};
  const std::size_t gmax = ck.full() ? 5 : 4;
  double prev_lo = -1.0, prev_hi = 2.0;
  for (std::size_t g = 1; g <= gmax; ++g) {
    const double lo = ck.error(10, 3, g, 20, Variant::LB);
    const double hi = ck.error(10, 3, g, 20, Variant::UB);
    if (!(lo > prev_lo) || !(hi < prev_hi) || lo > hi) {
      r.passed = false;
      r.detail = fmt("g=%zu: lower %.12g (prev %.12g), upper %.12g (prev %.12g)", g, lo, prev_lo,
                     hi, prev_hi);
      return r;
    }
    prev_lo = lo;
    prev_hi = hi;
  }
  r.detail = fmt("g = 1..%zu, final interval [%.6f, %.6f]", gmax, prev_lo, prev_hi);
  return r;
}

CheckResult pathwise_sandwich(const Checker& ck) {
  CheckResult r{"pathwise sandwich", true, "", 0.0};
  const int configs = ck.full() ? 1000 : 200;
  Rng rng(ck.seed());
  for (int i = 0; i < configs; ++i) {
    const std::size_t m = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, m)(rng);
    const std::uint64_t g = std::uniform_int_distribution<std::uint64_t>(1, 3)(rng);
    const std::uint64_t T = std::uniform_int_distribution<std::uint64_t>(1, 50)(rng);
    const auto report = sandwich_trace(m, d, g, T, rng());
    if (!report.ok) {
      r.passed = false;
      r.detail = fmt("m=%zu d=%zu g=%llu: %s fails at step %llu counter %zu", m, d,
                     static_cast<unsigned long long>(g), report.violation->pair.c_str(),
                     static_cast<unsigned long long>(report.violation->step),
                     report.violation->counter);
      return r;
    }
  }
  r.detail = fmt("%d configurations", configs);
  return r;
}

CheckResult series_identities(const Checker&) {
  CheckResult r{"birth-death series identities", true, "", 0.0};
  for (std::size_t m = 3; m <= 30; ++m) {
    const auto s = closed_form::bd_series(m);
    const double mm = static_cast<double>(m);
    if (std::abs(s.error_rate - 0.5) > 1e-12 || std::abs(s.growth_rate - mm / 2) > 1e-12 * mm ||
        std::abs(s.mass - 1.0) > 1e-12) {
      r.passed = false;
      r.detail = fmt("m=%zu: error %.15g growth %.15g mass %.15g", m, s.error_rate,
                     s.growth_rate, s.mass);
      return r;
    }
  }
  r.detail = "m = 3..30";
  return r;
}

CheckResult birth_death_simulation(const Checker& ck) {
  CheckResult r{"d=m-1 simulation, m=10 T=1e5", true, "", 0.0};
  SimConfig config;
  config.m = 10;
  config.d = 9;
  config.T = 100'000;
  config.runs = 1;
  config.seed = ck.seed();
  const auto stats = estimate_error(config);
  const double T = static_cast<double>(config.T);
  std::string detail = fmt("error %.5f counter %.5f", stats.mean_error_rate,
                           stats.mean_counter_rate);
  bool ok = std::abs(stats.mean_error_rate - 0.5) <= 0.01 &&
            std::abs(stats.mean_counter_rate - 0.5) <= 0.01;
  for (std::uint64_t g = 1; g <= 4; ++g) {
    const double p = closed_form::bd_gap_tail(10, g);
    const double se = std::sqrt(p * (1.0 - p) / T);
    const double got = stats.gap_fraction[g - 1];
    detail += fmt("; gap>=%llu %.5f vs %.5f", static_cast<unsigned long long>(g), got, p);
    if (std::abs(got - p) > 3.0 * se) ok = false;
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& options) {
  const Checker ck(options);
  using Check = std::pair<const char*, std::function<CheckResult(const Checker&)>>;
  std::vector<Check> checks = {{"oracle_equivalence", oracle_equivalence},
                               {"capped_oracle", capped_oracle},
                               {"kernel_soundness", kernel_soundness},
                               {"closed_form_vs_chain", closed_form_vs_chain},
                               {"monotone_squeeze", monotone_squeeze},
                               {"pathwise_sandwich", pathwise_sandwich},
                               {"series_identities", series_identities}};
  if (options.level == VerifyLevel::Full)
    checks.emplace_back("birth_death_simulation", birth_death_simulation);

  VerifyReport report;
  for (const auto& [name, check] : checks) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult result;
    try {
      result = check(ck);
    } catch (const std::exception& e) {
      result.name = name;
      result.passed = false;
      result.detail = std::string("exception: ") + e.what();
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.checks.push_back(std::move(result));
  }
  return report;
}

}  // namespace cubound
