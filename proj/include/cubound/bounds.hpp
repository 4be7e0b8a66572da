#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cubound/kernel.hpp"

namespace cubound {

/// Distribution over the states of a StateSpace at step t.
struct OccupancyVector {
  std::vector<double> probs;
  std::uint64_t t = 0;
};

/// Point mass on the initial state (m, 0, ..., 0).
OccupancyVector initial_occupancy(const StateSpace& space);

/// Calls visit(pi(t)) for t = 0 .. T-1 without keeping the history.
void for_each_occupancy(const TransitionKernel& kernel, const StateSpace& space, std::uint64_t T,
                        const std::function<void(const OccupancyVector&)>& visit);

/// pi(0) .. pi(T-1). Memory grows as T * |states|; meant for small chains.
std::vector<OccupancyVector> evolve_occupancy(const TransitionKernel& kernel,
                                              const StateSpace& space, std::uint64_t T);

/// (1/T) sum_{t=first_step}^{first_step+T-1} <pi(t), (P ⊙ B)·1> for an
/// already built kernel. first_step = 0 gives E[e(T)]/T, the expected
/// average error after T steps; first_step = 1 drops the first step's
/// contribution and adds step T+1's, i.e. (E[e(T+1)] - E[e(1)]) / T.
double expected_error(const TransitionKernel& kernel, const StateSpace& space, std::uint64_t T,
                      std::uint64_t first_step = 0);

/// l_g(T) for LB, U_g(T) for UB.
double expected_error(std::size_t m, std::size_t d, std::size_t g, std::uint64_t T,
                      Variant variant);

struct StationaryOptions {
  double tol = 1e-12;
  std::uint64_t max_iters = 1'000'000;
};

struct StationaryResult {
  OccupancyVector pi;
  std::uint64_t iterations = 0;
  double residual = 0.0;  // ||pi P - pi||_inf at the returned pi
};

/// Power iteration from the initial point mass until ||pi P - pi||_inf <= tol.
/// Throws NonConvergenceError after max_iters.
StationaryResult stationary(const TransitionKernel& kernel, const StateSpace& space,
                            const StationaryOptions& options = {});

/// Dense solve of pi (I - P) = 0, sum pi = 1. Only for small chains.
std::vector<double> stationary_direct(const TransitionKernel& kernel);

/// Size limit below which stationary_direct is used as a cross-check.
inline constexpr std::size_t kDirectSolveLimit = 2000;

struct AsymptoticResult {
  double value = 0.0;
  std::uint64_t iterations = 0;
  double residual = 0.0;
  std::optional<double> direct_value;  // dense-solve value for small chains
};

/// <pi(inf), (P ⊙ B)·1> for an already built kernel.
AsymptoticResult asymptotic_error(const TransitionKernel& kernel, const StateSpace& space,
                                  const StationaryOptions& options = {});

/// l_g(inf) for LB, U_g(inf) for UB.
AsymptoticResult asymptotic_error(std::size_t m, std::size_t d, std::size_t g, Variant variant,
                                  const StationaryOptions& options = {});

/// Lower and upper bound for one (m, d, g, T), with sizes and timings.
struct BoundResult {
  std::size_t m = 0, d = 0, g = 0;
  std::uint64_t T = 0;
  std::size_t states = 0;
  std::optional<double> lower, upper;
  std::size_t lower_edges = 0, upper_edges = 0;
  double lower_seconds = 0.0, upper_seconds = 0.0;
};

struct BoundRequest {
  bool lower = true;
  bool upper = true;
  std::uint64_t first_step = 0;  // passed to expected_error
  /// Called with each built kernel, e.g. to serialize it.
  std::function<void(const StateSpace&, const TransitionKernel&)> on_kernel;
};

BoundResult compute_bounds(std::size_t m, std::size_t d, std::size_t g, std::uint64_t T,
                           const BoundRequest& request = {});

}  // namespace cubound
