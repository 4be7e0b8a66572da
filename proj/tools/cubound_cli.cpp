#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cubound/bounds.hpp"
#include "cubound/closed_form.hpp"
#include "cubound/simulate.hpp"
#include "cubound/verify.hpp"
#include "output.hpp"

using namespace cubound;
using cli::Cell;
using cli::OutputRecord;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kNonConvergence = 2, kVerifyFailed = 3 };

using Clock = std::chrono::steady_clock;

Cell i64(std::uint64_t x) { return static_cast<std::int64_t>(x); }

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Common {
  std::string format = "text";
};

void add_format(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
}

void emit(OutputRecord& r, const Common& c, Clock::time_point start) {
  r.wall_seconds = since(start);
  cli::write(std::cout, r, cli::parse_format(c.format));
}

void require_cap(std::size_t g) {
  if (g == 0)
    throw ConfigError(
        "g = 0 is not supported: the upper-bound increment probability exceeds 1 when "
        "all counters sit at the minimum; use g >= 1");
}

// --- bounds ---------------------------------------------------------------

struct BoundsArgs {
  Common common;
  std::size_t m = 0, d = 0, g = 0;
  std::uint64_t T = 0;
  std::string variant = "both";
  std::string dump;
};

std::string dump_path(const std::string& base, Variant v, bool both) {
  if (!both) return base;
  const auto tag = std::string(".") + std::string(to_string(v));
  const auto dot = base.find_last_of('.');
  const auto slash = base.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return base + tag;
  return base.substr(0, dot) + tag + base.substr(dot);
}

int run_bounds(const BoundsArgs& a) {
  const auto start = Clock::now();
  require_cap(a.g);
  BoundRequest req;
  req.lower = a.variant != "ub";
  req.upper = a.variant != "lb";
  const bool both = req.lower && req.upper;
  if (!a.dump.empty())
    req.on_kernel = [&](const StateSpace& space, const TransitionKernel& kernel) {
      const auto path = dump_path(a.dump, kernel.variant(), both);
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot open " + path + " for writing");
      write_kernel_json(out, space, kernel);
    };
  const auto b = compute_bounds(a.m, a.d, a.g, a.T, req);

  OutputRecord r;
  r.command = "bounds";
  r.param("m", i64(a.m));
  r.param("d", i64(a.d));
  r.param("g", i64(a.g));
  r.param("t", i64(a.T));
  r.param("variant", a.variant);
  r.result("states", i64(b.states));
  if (b.lower) {
    r.result("lower", *b.lower);
    r.result("lower_edges", i64(b.lower_edges));
  }
  if (b.upper) {
    r.result("upper", *b.upper);
    r.result("upper_edges", i64(b.upper_edges));
  }
  emit(r, a.common, start);
  return kOk;
}

// --- asymptotic -----------------------------------------------------------

struct AsymptoticArgs {
  Common common;
  std::size_t m = 0, d = 0, g = 0;
  double tol = 1e-12;
  std::uint64_t max_iters = 1'000'000;
  std::string variant = "both";
};

int run_asymptotic(const AsymptoticArgs& a) {
  const auto start = Clock::now();
  require_cap(a.g);
  const StationaryOptions opts{a.tol, a.max_iters};
  const StateSpace space(ChainParams{a.m, a.d, a.g});

  OutputRecord r;
  r.command = "asymptotic";
  r.param("m", i64(a.m));
  r.param("d", i64(a.d));
  r.param("g", i64(a.g));
  r.param("tol", a.tol);
  r.param("variant", a.variant);
  r.result("states", i64(space.size()));
  auto one = [&](Variant v, const char* name) {
    const auto res = asymptotic_error(build_kernel(space, v), space, opts);
    const std::string n = name;
    r.result(n, res.value);
    r.result(n + "_iterations", i64(res.iterations));
    r.result(n + "_residual", res.residual);
    if (res.direct_value) r.result(n + "_direct", *res.direct_value);
  };
  if (a.variant != "ub") one(Variant::LB, "lower");
  if (a.variant != "lb") one(Variant::UB, "upper");
  emit(r, a.common, start);
  return kOk;
}

// --- closed-form ----------------------------------------------------------

struct ClosedFormArgs {
  Common common;
  std::size_t m = 0;
  std::optional<std::uint64_t> g;
};

int run_closed_form(const ClosedFormArgs& a) {
  const auto start = Clock::now();
  if (a.m < 3) throw ConfigError("closed forms for d = m-1 need m >= 3");
  namespace cf = closed_form;
  OutputRecord r;
  r.command = "closed-form";
  r.param("m", i64(a.m));
  if (a.g) r.param("g", i64(*a.g));

  r.result("error_rate", cf::bd_error_rate(a.m));
  r.result("counter_rate", cf::bd_growth_rate(a.m) / static_cast<double>(a.m));
  r.result("growth_rate", cf::bd_growth_rate(a.m));
  const auto [lo, hi] = cf::g1_asymptotic(a.m);
  r.result("g1_lower", lo);
  r.result("g1_upper", hi);
  if (a.g) r.result("gap_tail", cf::bd_gap_tail(a.m, *a.g));

  cli::Table pi{"limiting", {"f", "pi"}, {}};
  for (std::uint64_t f = 0; f <= 10; ++f) pi.rows.push_back({i64(f), cf::bd_limiting(a.m, f)});
  cli::Table tail{"gap_tails", {"g", "fraction"}, {}};
  for (std::uint64_t g = 1; g <= 10; ++g) tail.rows.push_back({i64(g), cf::bd_gap_tail(a.m, g)});
  r.tables.push_back(std::move(pi));
  r.tables.push_back(std::move(tail));
  emit(r, a.common, start);
  return kOk;
}

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
  Common common;
  std::size_t m = 0, d = 0;
  std::uint64_t T = 0, runs = 1, seed = 0, cap = 0;
  std::string variant = "cu";
  bool keep_runs = false;
};

int run_simulate(const SimulateArgs& a) {
  const auto start = Clock::now();
  SimConfig c;
  c.m = a.m;
  c.d = a.d;
  c.T = a.T;
  c.runs = a.runs;
  c.seed = a.seed;
  c.variant = parse_variant(a.variant);
  c.g = a.cap;
  c.keep_runs = a.keep_runs;
  if (c.variant != Variant::CU) require_cap(a.cap);
  const auto s = estimate_error(c);

  OutputRecord r;
  r.command = "simulate";
  r.param("m", i64(a.m));
  r.param("d", i64(a.d));
  r.param("t", i64(a.T));
  r.param("runs", i64(a.runs));
  r.param("seed", i64(a.seed));
  r.param("variant", a.variant);
  if (c.variant != Variant::CU) r.param("cap", i64(a.cap));
  r.result("mean_error_rate", s.mean_error_rate);
  r.result("error_rate_stderr", s.error_rate_stderr);
  r.result("mean_counter_rate", s.mean_counter_rate);
  r.result("counter_rate_stderr", s.counter_rate_stderr);
  if (a.keep_runs) {
    cli::Table runs{"runs", {"run", "error", "counter_rate"}, {}};
    for (const auto& rr : s.runs) runs.rows.push_back({i64(rr.run), rr.error, rr.counter_rate});
    r.tables.push_back(std::move(runs));
  }
  cli::Table hist{"gap_histogram", {"g", "fraction"}, {}};
  for (std::size_t g = 0; g < s.gap_fraction.size(); ++g)
    hist.rows.push_back({i64(g + 1), s.gap_fraction[g]});
  r.tables.push_back(std::move(hist));
  emit(r, a.common, start);
  return kOk;
}

// --- oracle ---------------------------------------------------------------

struct OracleArgs {
  Common common;
  std::size_t m = 0, d = 0;
  std::uint64_t T = 0;
};

int run_oracle(const OracleArgs& a) {
  const auto start = Clock::now();
  const auto o = brute_force_expected_error(a.m, a.d, a.T);
  OutputRecord r;
  r.command = "oracle";
  r.param("m", i64(a.m));
  r.param("d", i64(a.d));
  r.param("t", i64(a.T));
  r.result("numerator", i64(o.numerator));
  r.result("denominator", i64(o.denominator));
  r.result("expected_error", o.value());
  r.result("expected_error_rate", o.value() / static_cast<double>(a.T));
  emit(r, a.common, start);
  return kOk;
}

// --- table1 ---------------------------------------------------------------

struct Table1Args {
  Common common;
  std::size_t gmax = 3;
};

int run_table1(const Table1Args& a) {
  const auto start = Clock::now();
  if (a.gmax >= 4)
    std::cerr << "warning: g = 4 and 5 build kernels with 230300 and 2349060 states; "
                 "expect minutes (g = 4) to hours (g = 5)\n";
  constexpr std::size_t m = 50, d = 4;
  constexpr std::uint64_t T = 250;
  OutputRecord r;
  r.command = "table1";
  r.param("m", i64(m));
  r.param("d", i64(d));
  r.param("t", i64(T));
  r.param("gmax", i64(a.gmax));
  cli::Table rows{"rows",
                  {"g", "states", "lower", "upper", "lower_shifted", "upper_shifted",
                   "lower_seconds", "upper_seconds"},
                  {}};
  for (std::size_t g = 1; g <= a.gmax; ++g) {
    const StateSpace space(ChainParams{m, d, g});
    std::vector<Cell> row{i64(g), i64(space.size())};
    double values[2][2];
    double seconds[2];
    for (int i = 0; i < 2; ++i) {
      const auto t0 = Clock::now();
      const auto kernel = build_kernel(space, i == 0 ? Variant::LB : Variant::UB);
      values[i][0] = expected_error(kernel, space, T);
      values[i][1] = expected_error(kernel, space, T, 1);
      seconds[i] = since(t0);
    }
    row.insert(row.end(), {values[0][0], values[1][0], values[0][1], values[1][1]});
    row.insert(row.end(), {seconds[0], seconds[1]});
    rows.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(rows));
  emit(r, a.common, start);
  return kOk;
}

// --- verify ---------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::string level = "quick";
};

int run_verify(const VerifyArgs& a) {
  const auto start = Clock::now();
  VerifyOptions opts;
  opts.level = a.level == "full" ? VerifyLevel::Full : VerifyLevel::Quick;
  const auto report = run_verification(opts);
  OutputRecord r;
  r.command = "verify";
  r.param("level", a.level);
  r.result("passed", report.passed() ? "true" : "false");
  cli::Table checks{"checks", {"check", "status", "seconds", "detail"}, {}};
  for (const auto& c : report.checks)
    checks.rows.push_back({c.name, c.passed ? "PASS" : "FAIL", c.seconds, c.detail});
  r.tables.push_back(std::move(checks));
  emit(r, a.common, start);
  if (!report.passed()) {
    std::cerr << "failed checks:";
    for (const auto& c : report.checks)
      if (!c.passed) std::cerr << ' ' << c.name;
    std::cerr << '\n';
    return kVerifyFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Error bounds for count-min sketches with conservative updates"};
  app.require_subcommand(1);

  BoundsArgs bounds;
  auto* cmd = app.add_subcommand("bounds", "Finite-horizon lower/upper bounds l_g(T), U_g(T)");
  cmd->add_option("--m", bounds.m, "number of counters")->required();
  cmd->add_option("--d", bounds.d, "counters per item")->required();
  cmd->add_option("--g", bounds.g, "gap cap (>= 1)")->required();
  cmd->add_option("--t", bounds.T, "horizon T")->required();
  cmd->add_option("--variant", bounds.variant)
      ->check(CLI::IsMember({"lb", "ub", "both"}))
      ->capture_default_str();
  cmd->add_option("--dump-kernel", bounds.dump,
                  "write the kernel as JSON; with both variants .lb/.ub is added to the name");
  add_format(cmd, bounds.common);
  cmd->callback([&] { std::exit(run_bounds(bounds)); });

  AsymptoticArgs asym;
  cmd = app.add_subcommand("asymptotic", "Limits l_g(inf), U_g(inf)");
  cmd->add_option("--m", asym.m)->required();
  cmd->add_option("--d", asym.d)->required();
  cmd->add_option("--g", asym.g)->required();
  cmd->add_option("--tol", asym.tol)->capture_default_str();
  cmd->add_option("--max-iters", asym.max_iters)->capture_default_str();
  cmd->add_option("--variant", asym.variant)
      ->check(CLI::IsMember({"lb", "ub", "both"}))
      ->capture_default_str();
  add_format(cmd, asym.common);
  cmd->callback([&] { std::exit(run_asymptotic(asym)); });

  ClosedFormArgs cf;
  cmd = app.add_subcommand("closed-form", "Birth-death chain results for d = m-1");
  cmd->add_option("--m", cf.m)->required();
  cmd->add_option("--g", cf.g, "gap level for the tail fraction");
  add_format(cmd, cf.common);
  cmd->callback([&] { std::exit(run_closed_form(cf)); });

  SimulateArgs sim;
  cmd = app.add_subcommand("simulate", "Monte-Carlo estimate of E[e*(T)/T]");
  cmd->add_option("--m", sim.m)->required();
  cmd->add_option("--d", sim.d)->required();
  cmd->add_option("--t", sim.T)->required();
  cmd->add_option("--runs", sim.runs)->capture_default_str();
  cmd->add_option("--seed", sim.seed)->capture_default_str();
  cmd->add_option("--variant", sim.variant)
      ->check(CLI::IsMember({"cu", "lb", "ub"}))
      ->capture_default_str();
  cmd->add_option("--cap", sim.cap, "gap cap g for lb/ub");
  cmd->add_flag("--keep-runs", sim.keep_runs, "include per-run errors");
  add_format(cmd, sim.common);
  cmd->callback([&] { std::exit(run_simulate(sim)); });

  OracleArgs oracle;
  cmd = app.add_subcommand("oracle", "Exact E[e*(T)] by enumeration (tiny instances)");
  cmd->add_option("--m", oracle.m)->required();
  cmd->add_option("--d", oracle.d)->required();
  cmd->add_option("--t", oracle.T)->required();
  add_format(cmd, oracle.common);
  cmd->callback([&] { std::exit(run_oracle(oracle)); });

  Table1Args table1;
  cmd = app.add_subcommand("table1", "Bounds for m=50, d=4, T=250 and g = 1..gmax");
  cmd->add_option("--gmax", table1.gmax)->check(CLI::Range(1, 5))->capture_default_str();
  add_format(cmd, table1.common);
  cmd->callback([&] { std::exit(run_table1(table1)); });

  VerifyArgs verify;
  cmd = app.add_subcommand("verify", "Run the cross-check suite");
  cmd->add_option("--level", verify.level)
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  add_format(cmd, verify.common);
  cmd->callback([&] { std::exit(run_verify(verify)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << " after " << e.iterations() << " iterations\n";
    return kNonConvergence;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
