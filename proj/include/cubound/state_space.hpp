#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubound/sketch.hpp"

namespace cubound {

/// Parameters of a capped chain: m counters, d per step, gap cap g >= 1.
struct ChainParams {
  std::size_t m;
  std::size_t d;
  std::size_t g;

  /// Throws ConfigError unless m >= 2, 1 <= d <= m and g >= 1.
  void validate() const;
};

/// Largest l with k[l] > 0.
std::size_t top_level(std::span<const std::uint32_t> k);

/// True iff k is a member of the capped state space for `params`: length
/// g+1, entries summing to m, k[0] >= 1, k[top] >= d.
bool is_member(std::span<const std::uint32_t> k, const ChainParams& params);

/// |Omega_g| = C(m+g-d, g).
std::uint64_t state_count(const ChainParams& params);

/// The enumerated capped state space. States are fixed-length (g+1)
/// vectors with trailing zeros, ordered by top level ascending and then
/// lexicographically descending; states[0] is (m, 0, ..., 0).
class StateSpace {
 public:
  using Index = std::uint32_t;
  static constexpr Index npos = ~Index{0};

  explicit StateSpace(const ChainParams& params);

  const ChainParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t width() const noexcept { return width_; }

  std::span<const std::uint32_t> state(Index i) const {
    return {flat_.data() + static_cast<std::size_t>(i) * width_, width_};
  }

  /// Index of k (length g+1), or npos when k is not a member.
  Index index_of(std::span<const std::uint32_t> k) const;

 private:
  void enumerate();
  void insert(std::span<const std::uint32_t> k);
  std::uint64_t pack(std::span<const std::uint32_t> k) const;
  std::string bytes(std::span<const std::uint32_t> k) const;

  ChainParams params_;
  std::size_t width_;
  std::size_t size_ = 0;
  std::vector<std::uint32_t> flat_;
  unsigned bits_ = 0;  // bits per packed entry; 0 selects the string index
  std::unordered_map<std::uint64_t, Index> packed_index_;
  std::unordered_map<std::string, Index> wide_index_;
};

StateSpace enumerate_states(std::size_t m, std::size_t d, std::size_t g);

}  // namespace cubound
