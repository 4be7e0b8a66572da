#include "cubound/closed_form.hpp"

#include <cmath>
#include <string>

#include "cubound/errors.hpp"

namespace cubound::closed_form {

namespace {

void require_birth_death(std::size_t m) {
  if (m < 3)
    throw ConfigError("birth-death formulas need m >= 3, got m=" + std::to_string(m));
}

constexpr double kSeriesCutoff = 1e-15;

}  // namespace

double bd_limiting(std::size_t m, std::uint64_t f) {
  require_birth_death(m);
  const double mm = static_cast<double>(m);
  if (f == 0) return (mm - 2.0) / (2.0 * (mm - 1.0));
  return mm * (mm - 2.0) / (2.0 * std::pow(mm - 1.0, static_cast<double>(f + 1)));
}

double bd_transition(std::size_t m, std::uint64_t f_from, std::uint64_t f_to) {
  if (m < 2) throw ConfigError("m must be at least 2");
  const double mm = static_cast<double>(m);
  if (f_from == 0) return f_to == 1 ? 1.0 : 0.0;
  if (f_to == f_from + 1) return 1.0 / mm;
  if (f_to + 1 == f_from) return (mm - 1.0) / mm;
  return 0.0;
}

SeriesCheck bd_series(std::size_t m) {
  require_birth_death(m);
  const double mm = static_cast<double>(m);
  const double up = bd_transition(m, 1, 2);
  const double down = bd_transition(m, 1, 0);

  // From gap 0 all m-1 minimum counters are selected and incremented; the
  // absent item's error grows iff its set is exactly those counters.
  const double pi0 = bd_limiting(m, 0);
  SeriesCheck out{pi0 * bd_transition(m, 0, 1) / mm, (mm - 1.0) * bd_transition(m, 0, 1) * pi0,
                  pi0, 1};
  // From gap f >= 1: either the lone minimum counter is selected and goes
  // down (1 increment, error grows unless the absent set skips it), or the
  // m-1 maximum counters are selected and go up (m-1 increments, error
  // grows iff the absent set holds the minimum counter).
  for (std::uint64_t f = 1;; ++f) {
    const double pif = bd_limiting(m, f);
    out.error_rate += ((mm - 1.0) / mm * down + up / mm) * pif;
    out.growth_rate += (1.0 * down + (mm - 1.0) * up) * pif;
    out.mass += pif;
    ++out.terms;
    if (pif < kSeriesCutoff) break;
  }
  return out;
}

double bd_error_rate(std::size_t m) {
  const auto series = bd_series(m);
  if (std::abs(series.error_rate - 0.5) > 1e-12)
    throw ConsistencyError("error-rate series does not sum to 1/2");
  return 0.5;
}

double bd_growth_rate(std::size_t m) {
  const auto series = bd_series(m);
  const double closed = static_cast<double>(m) / 2.0;
  if (std::abs(series.growth_rate - closed) > 1e-12 * closed)
    throw ConsistencyError("growth-rate series does not sum to m/2");
  return closed;
}

double bd_gap_tail(std::size_t m, std::uint64_t g) {
  if (m < 2) throw ConfigError("m must be at least 2");
  if (g < 1) throw ConfigError("gap threshold g must be at least 1");
  const double mm = static_cast<double>(m);
  return mm / (2.0 * std::pow(mm - 1.0, static_cast<double>(g)));
}

std::pair<double, double> g1_asymptotic(std::size_t m) {
  if (m < 2) throw ConfigError("m must be at least 2");
  const double mm = static_cast<double>(m);
  return {(mm - 1.0) / (2.0 * mm - 1.0), mm / (2.0 * mm - 1.0)};
}

}  // namespace cubound::closed_form
