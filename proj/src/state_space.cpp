#include "cubound/state_space.hpp"

#include <bit>
#include <cstring>
#include <limits>
#include <numeric>

#include "cubound/binomial.hpp"

namespace cubound {

void ChainParams::validate() const {
  SketchConfig{m, d};
  if (g == 0)
    throw ConfigError(
        "gap cap g must be at least 1 (g = 0 makes the UB boost event overlap the minimum level)");
}

std::size_t top_level(std::span<const std::uint32_t> k) {
  std::size_t top = 0;
  for (std::size_t l = 0; l < k.size(); ++l)
    if (k[l] > 0) top = l;
  return top;
}

bool is_member(std::span<const std::uint32_t> k, const ChainParams& params) {
  if (k.size() != params.g + 1) return false;
  const std::uint64_t total = std::accumulate(k.begin(), k.end(), std::uint64_t{0});
  if (total != params.m || k[0] < 1) return false;
  return k[top_level(k)] >= params.d;
}

std::uint64_t state_count(const ChainParams& params) {
  params.validate();
  const auto c = binomial_exact(params.m + params.g - params.d, params.g);
  if (!c || *c > std::numeric_limits<std::uint64_t>::max())
    throw ConfigError("state space too large to enumerate");
  return static_cast<std::uint64_t>(*c);
}

StateSpace::StateSpace(const ChainParams& params) : params_(params), width_(params.g + 1) {
  const auto count = state_count(params_);
  if (count >= npos) throw ConfigError("state space exceeds 32-bit indexing");
  const unsigned per_entry = std::bit_width(params_.m);
  bits_ = per_entry * width_ <= 64 ? per_entry : 0;
  flat_.reserve(count * width_);
  if (bits_ != 0)
    packed_index_.reserve(count);
  else
    wide_index_.reserve(count);
  enumerate();
  if (size_ != count)
    throw ConsistencyError("enumerated " + std::to_string(size_) + " states, expected " +
                           std::to_string(count));
}

std::uint64_t StateSpace::pack(std::span<const std::uint32_t> k) const {
  std::uint64_t key = 0;
  for (auto x : k) key = (key << bits_) | x;
  return key;
}

std::string StateSpace::bytes(std::span<const std::uint32_t> k) const {
  std::string key(k.size() * sizeof(std::uint32_t), '\0');
  std::memcpy(key.data(), k.data(), key.size());
  return key;
}

void StateSpace::insert(std::span<const std::uint32_t> k) {
  const auto index = static_cast<Index>(size_++);
  flat_.insert(flat_.end(), k.begin(), k.end());
  if (bits_ != 0)
    packed_index_.emplace(pack(k), index);
  else
    wide_index_.emplace(bytes(k), index);
}

StateSpace::Index StateSpace::index_of(std::span<const std::uint32_t> k) const {
  if (k.size() != width_) return npos;
  if (bits_ != 0) {
    for (auto x : k)
      if (x > params_.m) return npos;
    auto it = packed_index_.find(pack(k));
    return it == packed_index_.end() ? npos : it->second;
  }
  auto it = wide_index_.find(bytes(k));
  return it == wide_index_.end() ? npos : it->second;
}

void StateSpace::enumerate() {
  const auto m = static_cast<std::uint32_t>(params_.m);
  const auto d = static_cast<std::uint32_t>(params_.d);
  std::vector<std::uint32_t> k(width_, 0);

  k[0] = m;
  insert(k);
  if (d == m) return;

  for (std::size_t top = 1; top <= params_.g; ++top) {
    std::fill(k.begin(), k.end(), 0);
    // Fill positions 0..top-1 in descending order; position `top` takes the
    // remainder, which must be at least d. Position 0 must be at least 1.
    auto fill = [&](auto&& self, std::size_t pos, std::uint32_t remaining) -> void {
      if (pos == top) {
        k[top] = remaining;
        insert(k);
        return;
      }
      const std::uint32_t lowest = pos == 0 ? 1 : 0;
      for (std::uint32_t x = remaining - d + 1; x-- > lowest;) {
        k[pos] = x;
        self(self, pos + 1, remaining - x);
      }
    };
    fill(fill, 0, m);
  }
}

StateSpace enumerate_states(std::size_t m, std::size_t d, std::size_t g) {
  return StateSpace(ChainParams{m, d, g});
}

}  // namespace cubound
