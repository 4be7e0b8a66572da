#pragma once

// Closed forms for d = m - 1, where the offset histogram collapses to the
// scalar gap and CU becomes a birth-death chain on {0, 1, 2, ...}.

#include <cstddef>
#include <cstdint>
#include <utility>

namespace cubound::closed_form {

/// Limiting probability that the gap equals f. Requires m >= 3.
double bd_limiting(std::size_t m, std::uint64_t f);

/// One-step probability of moving from gap f_from to gap f_to.
double bd_transition(std::size_t m, std::uint64_t f_from, std::uint64_t f_to);

/// Long-run error rate e*(T)/T; equals 1/2. Requires m >= 3.
double bd_error_rate(std::size_t m);

/// Long-run expected increments per step; equals m/2. Requires m >= 3.
double bd_growth_rate(std::size_t m);

/// Long-run fraction of steps with gap >= g: m / (2 (m-1)^g). Requires g >= 1.
double bd_gap_tail(std::size_t m, std::uint64_t g);

/// (l_1(inf), U_1(inf)) = ((m-1)/(2m-1), m/(2m-1)). Requires m >= 2.
std::pair<double, double> g1_asymptotic(std::size_t m);

/// Error rate and growth rate re-derived by summing the chain's series
/// until pi_f < 1e-15. Used to self-check the closed forms.
struct SeriesCheck {
  double error_rate;
  double growth_rate;
  double mass;  // sum of pi_f over the summed range
  std::uint64_t terms;
};
SeriesCheck bd_series(std::size_t m);

}  // namespace cubound::closed_form
