#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cubound/state_space.hpp"

namespace cubound {

// One step of a capped chain is driven by the event (v, c): v is the offset
// of the smallest selected counter above the global minimum, c the number of
// selected counters at that offset. The maps below give the successor state,
// its probability and the probability that an absent item's error grows.

/// Successor of k under (v, c) for the LB chain.
DeltaState gamma_lb(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
                    const ChainParams& params);

/// Successor of k under (v, c) for the UB chain.
DeltaState gamma_ub(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
                    const ChainParams& params);

/// P[(v, c) | k] = C(k_v, c) C(sum_{l>v} k_l, d-c) / C(m, d). Same for LB and UB.
double transition_prob(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
                       const ChainParams& params);

/// Probability that an absent item's error increments, given (k, v, c), LB chain.
double beta_lb(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
               const ChainParams& params);

/// As beta_lb, UB chain.
double beta_ub(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
               const ChainParams& params);

/// Throws InvalidEventError unless v <= g, 1 <= c <= min(d, k_v).
void check_event(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
                 const ChainParams& params);

struct Edge {
  StateSpace::Index target;
  std::uint16_t v;
  std::uint16_t c;
  double p;
  double beta;
};

/// Sparse LB or UB kernel in CSR layout. One edge per (v, c) event with
/// p > 0; events sharing a target are kept separate.
class TransitionKernel {
 public:
  TransitionKernel(Variant variant, std::vector<std::uint64_t> row_offsets, std::vector<Edge> edges);

  Variant variant() const noexcept { return variant_; }
  std::size_t rows() const noexcept { return row_offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Edge> row(std::size_t i) const {
    return {edges_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }

  /// (P ⊙ B)·1: the expected error increment out of each state.
  std::span<const double> expected_increment() const noexcept { return increment_; }

  /// next = pi · P.
  void step(std::span<const double> pi, std::span<double> next) const;

 private:
  Variant variant_;
  std::vector<std::uint64_t> row_offsets_;
  std::vector<Edge> edges_;
  std::vector<double> increment_;
};

/// Pluggable formulas behind build_kernel. The defaults are the functions
/// above; tests substitute altered ones to check that verification notices.
struct KernelFormulas {
  using Gamma = DeltaState (*)(std::span<const std::uint32_t>, std::size_t, std::size_t,
                               const ChainParams&);
  using Prob = double (*)(std::span<const std::uint32_t>, std::size_t, std::size_t,
                          const ChainParams&);
  Gamma gamma;
  Prob prob;
  Prob beta;

  static KernelFormulas for_variant(Variant variant);
};

TransitionKernel build_kernel(const StateSpace& space, Variant variant);
TransitionKernel build_kernel(const StateSpace& space, Variant variant,
                              const KernelFormulas& formulas);

/// Writes {m, d, g, variant, states, edges} as JSON.
void write_kernel_json(std::ostream& out, const StateSpace& space, const TransitionKernel& kernel);

}  // namespace cubound
