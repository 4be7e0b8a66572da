#pragma once

#include <cstdint>
#include <optional>

namespace cubound {

using uint128 = unsigned __int128;

/// Exact C(n, k), or nullopt if the value does not fit in 128 bits.
/// C(n, k) = 0 for k > n.
std::optional<uint128> binomial_exact(std::uint64_t n, std::uint64_t k);

/// C(n, k) as a double. Exact conversion when the value fits in 128 bits,
/// log-gamma otherwise.
double binomial(std::uint64_t n, std::uint64_t k);

/// ln C(n, k); -infinity when k > n.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// (C(a, k) - C(b, k)) / C(n, k) for b <= a <= n, computed from the exact
/// integer difference whenever the three binomials fit in 128 bits.
double binomial_difference_ratio(std::uint64_t a, std::uint64_t b,
                                 std::uint64_t n, std::uint64_t k);

/// C(a, i) * C(b, j) / C(n, k).
double binomial_product_ratio(std::uint64_t a, std::uint64_t i,
                              std::uint64_t b, std::uint64_t j,
                              std::uint64_t n, std::uint64_t k);

}  // namespace cubound
