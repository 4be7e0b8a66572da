#include "cubound/bounds.hpp"

#include "cubound/numeric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace cubound {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double dot(std::span<const double> a, std::span<const double> b) {
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0.0) s.add(a[i] * b[i]);
  return s.value();
}

void require_horizon(std::uint64_t T) {
  if (T < 1) throw ConfigError("horizon T must be at least 1");
}

}  // namespace

OccupancyVector initial_occupancy(const StateSpace& space) {
  OccupancyVector pi{std::vector<double>(space.size(), 0.0), 0};
  pi.probs[0] = 1.0;
  return pi;
}

void for_each_occupancy(const TransitionKernel& kernel, const StateSpace& space, std::uint64_t T,
                        const std::function<void(const OccupancyVector&)>& visit) {
  require_horizon(T);
  auto pi = initial_occupancy(space);
  std::vector<double> next(space.size());
  for (std::uint64_t t = 0; t < T; ++t) {
    visit(pi);
    if (t + 1 == T) break;
    kernel.step(pi.probs, next);
    pi.probs.swap(next);
    pi.t = t + 1;
  }
}

std::vector<OccupancyVector> evolve_occupancy(const TransitionKernel& kernel,
                                              const StateSpace& space, std::uint64_t T) {
  std::vector<OccupancyVector> out;
  out.reserve(T);
  for_each_occupancy(kernel, space, T, [&](const OccupancyVector& pi) { out.push_back(pi); });
  return out;
}

double expected_error(const TransitionKernel& kernel, const StateSpace& space, std::uint64_t T,
                      std::uint64_t first_step) {
  require_horizon(T);
  CompensatedSum total;
  const auto increment = kernel.expected_increment();
  for_each_occupancy(kernel, space, first_step + T, [&](const OccupancyVector& pi) {
    if (pi.t >= first_step) total.add(dot(pi.probs, increment));
  });
  return total.value() / static_cast<double>(T);
}

double expected_error(std::size_t m, std::size_t d, std::size_t g, std::uint64_t T,
                      Variant variant) {
  require_horizon(T);
  const StateSpace space(ChainParams{m, d, g});
  return expected_error(build_kernel(space, variant), space, T);
}

StationaryResult stationary(const TransitionKernel& kernel, const StateSpace& space,
                            const StationaryOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("stationary tolerance must be positive");
  auto pi = initial_occupancy(space);
  std::vector<double> next(space.size());
  double residual = 0.0;
  for (std::uint64_t it = 0; it < options.max_iters; ++it) {
    kernel.step(pi.probs, next);
    residual = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i)
      residual = std::max(residual, std::abs(next[i] - pi.probs[i]));
    if (residual <= options.tol) return {std::move(pi), it + 1, residual};
    pi.probs.swap(next);
    pi.t = it + 1;
  }
  throw NonConvergenceError("power iteration did not reach tolerance (residual " +
                                std::to_string(residual) + ")",
                            residual, options.max_iters);
}

std::vector<double> stationary_direct(const TransitionKernel& kernel) {
  const auto n = static_cast<Eigen::Index>(kernel.rows());
  // Rows of A are the balance equations sum_i pi_i (P_ij - delta_ij) = 0;
  // the last one is replaced by the normalization.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const auto& e : kernel.row(static_cast<std::size_t>(i)))
      a(static_cast<Eigen::Index>(e.target), i) += e.p;
    a(i, i) -= 1.0;
  }
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
  return {pi.data(), pi.data() + n};
}

AsymptoticResult asymptotic_error(std::size_t m, std::size_t d, std::size_t g, Variant variant,
                                  const StationaryOptions& options) {
  const StateSpace space(ChainParams{m, d, g});
  return asymptotic_error(build_kernel(space, variant), space, options);
}

AsymptoticResult asymptotic_error(const TransitionKernel& kernel, const StateSpace& space,
                                  const StationaryOptions& options) {
  const auto solved = stationary(kernel, space, options);
  AsymptoticResult out;
  out.value = dot(solved.pi.probs, kernel.expected_increment());
  out.iterations = solved.iterations;
  out.residual = solved.residual;
  if (space.size() <= kDirectSolveLimit) {
    const auto direct = stationary_direct(kernel);
    out.direct_value = dot(direct, kernel.expected_increment());
  }
  return out;
}

BoundResult compute_bounds(std::size_t m, std::size_t d, std::size_t g, std::uint64_t T,
                           const BoundRequest& request) {
  require_horizon(T);
  BoundResult out;
  out.m = m;
  out.d = d;
  out.g = g;
  out.T = T;

  const auto start = Clock::now();
  const StateSpace space(ChainParams{m, d, g});
  const double enumeration = seconds_since(start);
  out.states = space.size();

  auto run = [&](Variant variant, std::optional<double>& value, std::size_t& edges,
                 double& seconds) {
    const auto t0 = Clock::now();
    const auto kernel = build_kernel(space, variant);
    value = expected_error(kernel, space, T, request.first_step);
    seconds = enumeration + seconds_since(t0);
    edges = kernel.edge_count();
    if (request.on_kernel) request.on_kernel(space, kernel);
  };
  if (request.lower) run(Variant::LB, out.lower, out.lower_edges, out.lower_seconds);
  if (request.upper) run(Variant::UB, out.upper, out.upper_edges, out.upper_seconds);
  return out;
}

}  // namespace cubound
