#include "doctest.h"

#include <cmath>
#include <tuple>

#include "cubound/closed_form.hpp"
#include "cubound/errors.hpp"

using namespace cubound;
using namespace cubound::closed_form;

TEST_CASE("limiting distribution") {
  CHECK(bd_limiting(3, 0) == doctest::Approx(0.25));
  CHECK(bd_limiting(3, 1) == doctest::Approx(0.375));
  double s = 0.0;
  for (std::uint64_t f = 0; f <= 50; ++f) s += bd_limiting(10, f);
  CHECK(std::abs(s - 1.0) <= 1e-12);
  CHECK_THROWS_AS(bd_limiting(2, 0), ConfigError);
}

TEST_CASE("transition probabilities") {
  CHECK(bd_transition(5, 0, 1) == 1.0);
  CHECK(bd_transition(5, 0, 0) == 0.0);
  CHECK(bd_transition(5, 3, 4) == doctest::Approx(0.2));
  CHECK(bd_transition(5, 3, 2) == doctest::Approx(0.8));
  CHECK(bd_transition(5, 3, 5) == 0.0);
  CHECK(bd_transition(5, 3, 3) == 0.0);
}

TEST_CASE("limiting distribution satisfies detailed balance") {
  for (std::size_t m = 3; m <= 12; ++m)
    for (std::uint64_t f = 0; f < 20; ++f)
      CHECK(bd_limiting(m, f) * bd_transition(m, f, f + 1) ==
            doctest::Approx(bd_limiting(m, f + 1) * bd_transition(m, f + 1, f)).epsilon(1e-12));
}

TEST_CASE("rates") {
  CHECK(bd_error_rate(3) == 0.5);
  CHECK(bd_error_rate(10) == 0.5);
  CHECK(bd_growth_rate(4) == 2.0);
  CHECK(bd_growth_rate(3) == 1.5);
  for (std::size_t m = 3; m <= 30; ++m) {
    CHECK(bd_growth_rate(m) / static_cast<double>(m) == doctest::Approx(0.5));
    const auto s = bd_series(m);
    CHECK(std::abs(s.error_rate - 0.5) <= 1e-12);
    CHECK(std::abs(s.growth_rate - m / 2.0) <= 1e-12 * m);
    CHECK(std::abs(s.mass - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(bd_error_rate(2), ConfigError);
  CHECK_THROWS_AS(bd_growth_rate(2), ConfigError);
}

TEST_CASE("series truncated at f=60, m=4") {
  // Direct partial sum of the error-rate series.
  const double m = 4.0;
  double s = (1.0 / m) * bd_transition(4, 0, 1) * bd_limiting(4, 0);
  for (std::uint64_t f = 1; f <= 60; ++f)
    s += ((m - 1) / m * bd_transition(4, f, f - 1) + 1.0 / m * bd_transition(4, f, f + 1)) *
         bd_limiting(4, f);
  CHECK(std::abs(s - 0.5) <= 1e-12);
}

TEST_CASE("gap tail") {
  CHECK(bd_gap_tail(3, 1) == doctest::Approx(0.75));
  CHECK(bd_gap_tail(10, 2) == doctest::Approx(10.0 / 162.0));
  for (std::size_t m = 3; m <= 15; ++m) {
    CHECK(1.0 - bd_gap_tail(m, 1) == doctest::Approx(bd_limiting(m, 0)).epsilon(1e-12));
    for (std::uint64_t g = 1; g <= 5; ++g) {
      double tail = 0.0;
      for (std::uint64_t f = g; f < g + 400; ++f) tail += bd_limiting(m, f);
      CHECK(std::abs(tail - bd_gap_tail(m, g)) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(bd_gap_tail(5, 0), ConfigError);
}

TEST_CASE("g=1 asymptotics") {
  auto [lo, hi] = g1_asymptotic(3);
  CHECK(lo == doctest::Approx(0.4));
  CHECK(hi == doctest::Approx(0.6));
  std::tie(lo, hi) = g1_asymptotic(50);
  CHECK(lo == doctest::Approx(49.0 / 99.0));
  CHECK(hi == doctest::Approx(50.0 / 99.0));
  for (std::size_t m = 2; m <= 200; ++m) {
    std::tie(lo, hi) = g1_asymptotic(m);
    CHECK(lo < 0.5);
    CHECK(hi > 0.5);
    CHECK(hi - lo == doctest::Approx(1.0 / (2.0 * m - 1.0)));
  }
  std::tie(lo, hi) = g1_asymptotic(1000000);
  CHECK(std::abs(lo - 0.5) < 1e-6);
  CHECK(std::abs(hi - 0.5) < 1e-6);
  CHECK_THROWS_AS(g1_asymptotic(1), ConfigError);
}
