#include "cubound/binomial.hpp"

#include <cmath>
#include <limits>

namespace cubound {

namespace {

constexpr uint128 kMax128 = ~uint128{0};

long double widen(uint128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  return std::ldexp(static_cast<long double>(hi), 64) + static_cast<long double>(lo);
}

}  // namespace

std::optional<uint128> binomial_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return uint128{0};
  if (k > n - k) k = n - k;
  uint128 result = 1;
  // result * (n - k + i) / i stays an integer at every step; divide by the
  // gcd first to keep the intermediate product in range.
  for (std::uint64_t i = 1; i <= k; ++i) {
    uint128 num = n - k + i;
    uint128 den = i;
    uint128 a = result, b = den;
    while (b != 0) {
      uint128 r = a % b;
      a = b;
      b = r;
    }
    const uint128 g1 = a;
    result /= g1;
    den /= g1;
    // den now divides num.
    num /= den;
    if (result != 0 && num > kMax128 / result) return std::nullopt;
    result *= num;
  }
  return result;
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  const auto nn = static_cast<double>(n);
  const auto kk = static_cast<double>(k);
  return std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0);
}

double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  if (auto exact = binomial_exact(n, k)) return static_cast<double>(widen(*exact));
  return std::exp(log_binomial(n, k));
}

double binomial_difference_ratio(std::uint64_t a, std::uint64_t b,
                                 std::uint64_t n, std::uint64_t k) {
  auto ca = binomial_exact(a, k);
  auto cb = binomial_exact(b, k);
  auto cn = binomial_exact(n, k);
  if (ca && cb && cn) {
    if (*cn == 0) return 0.0;
    return static_cast<double>(widen(*ca - *cb) / widen(*cn));
  }
  const double ln_n = log_binomial(n, k);
  return std::exp(log_binomial(a, k) - ln_n) - std::exp(log_binomial(b, k) - ln_n);
}

double binomial_product_ratio(std::uint64_t a, std::uint64_t i,
                              std::uint64_t b, std::uint64_t j,
                              std::uint64_t n, std::uint64_t k) {
  if (i > a || j > b || k > n) return 0.0;
  auto ca = binomial_exact(a, i);
  auto cb = binomial_exact(b, j);
  auto cn = binomial_exact(n, k);
  if (ca && cb && cn) {
    // The product may not fit, but long double keeps 64 bits of mantissa.
    const long double num = widen(*ca) * widen(*cb);
    return static_cast<double>(num / widen(*cn));
  }
  return std::exp(log_binomial(a, i) + log_binomial(b, j) - log_binomial(n, k));
}

}  // namespace cubound
