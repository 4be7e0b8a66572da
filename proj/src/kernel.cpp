#include "cubound/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "cubound/binomial.hpp"
#include "cubound/parallel.hpp"

namespace cubound {

namespace {

std::uint64_t sum_above(std::span<const std::uint32_t> k, std::size_t v) {
  std::uint64_t s = 0;
  for (std::size_t l = v + 1; l < k.size(); ++l) s += k[l];
  return s;
}

DeltaState padded(std::span<const std::uint32_t> k, const ChainParams& params) {
  if (k.size() > params.g + 1) throw InvalidEventError("state longer than g+1 levels");
  DeltaState out(params.g + 1, 0);
  std::copy(k.begin(), k.end(), out.begin());
  return out;
}

bool is_frozen_event(std::size_t v, std::size_t c, const ChainParams& params) {
  return v == params.g && c == params.d;
}

// Shared by both chains for every event except (g, d).
DeltaState gamma_common(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
                        const ChainParams& params) {
  auto out = padded(k, params);
  if (v == 0 && c == out[0]) {
    // All minimum counters move up: the old level 1 becomes the new minimum.
    out[0] += out[1];
    for (std::size_t l = 1; l + 1 < out.size(); ++l) out[l] = out[l + 1];
    out.back() = 0;
    return out;
  }
  if (v + 1 > params.g)
    throw InvalidEventError("event (v=" + std::to_string(v) + ", c=" + std::to_string(c) +
                            ") has zero probability and no successor");
  out[v] -= static_cast<std::uint32_t>(c);
  out[v + 1] += static_cast<std::uint32_t>(c);
  return out;
}

}  // namespace

void check_event(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
                 const ChainParams& params) {
  if (v > params.g || v >= k.size())
    throw InvalidEventError("event level v=" + std::to_string(v) + " outside [0, g]");
  if (c < 1 || c > params.d || c > k[v])
    throw InvalidEventError("event count c=" + std::to_string(c) + " outside [1, min(d, k_v)]");
}

DeltaState gamma_lb(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
                    const ChainParams& params) {
  check_event(k, v, c, params);
  if (is_frozen_event(v, c, params)) return padded(k, params);
  return gamma_common(k, v, c, params);
}

DeltaState gamma_ub(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
                    const ChainParams& params) {
  check_event(k, v, c, params);
  if (!is_frozen_event(v, c, params)) return gamma_common(k, v, c, params);
  const auto g = params.g;
  const auto d = static_cast<std::uint32_t>(params.d);
  DeltaState out(g + 1, 0);
  if (g == 1) {
    out[0] = static_cast<std::uint32_t>(params.m) - d;
    out[1] = d;
    return out;
  }
  // Minimum counters and the d selected maximum counters all move up by one.
  const auto in = padded(k, params);
  out[0] = in[0] + in[1];
  for (std::size_t l = 1; l + 1 < g; ++l) out[l] = in[l + 1];
  out[g - 1] = in[g] - d;
  out[g] = d;
  return out;
}

double transition_prob(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
                       const ChainParams& params) {
  if (v >= k.size() || c > params.d) return 0.0;
  return binomial_product_ratio(k[v], c, sum_above(k, v), params.d - c, params.m, params.d);
}

double beta_lb(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
               const ChainParams& params) {
  check_event(k, v, c, params);
  if (is_frozen_event(v, c, params)) return 0.0;
  const auto above = sum_above(k, v);
  return binomial_difference_ratio(above + c, above, params.m, params.d);
}

double beta_ub(std::span<const std::uint32_t> k, std::size_t v, std::size_t c,
               const ChainParams& params) {
  check_event(k, v, c, params);
  if (!is_frozen_event(v, c, params)) return beta_lb(k, v, c, params);
  // The absent item's error grows if its set is exactly the d selected
  // counters, or if it touches any of the k_0 minimum counters.
  const auto m = params.m, d = params.d;
  const auto total = binomial_exact(m, d);
  const auto avoid_min = binomial_exact(m - k[0], d);
  if (total && avoid_min && *total < ~uint128{0}) {
    const uint128 hits = 1 + *total - *avoid_min;
    return static_cast<double>(static_cast<long double>(hits) / static_cast<long double>(*total));
  }
  return 1.0 / binomial(m, d) + 1.0 - std::exp(log_binomial(m - k[0], d) - log_binomial(m, d));
}

KernelFormulas KernelFormulas::for_variant(Variant variant) {
  switch (variant) {
    case Variant::LB: return {&gamma_lb, &transition_prob, &beta_lb};
    case Variant::UB: return {&gamma_ub, &transition_prob, &beta_ub};
    case Variant::CU: break;
  }
  throw ConfigError("kernels exist only for the lb and ub variants");
}

TransitionKernel::TransitionKernel(Variant variant, std::vector<std::uint64_t> row_offsets,
                                   std::vector<Edge> edges)
    : variant_(variant), row_offsets_(std::move(row_offsets)), edges_(std::move(edges)) {
  increment_.assign(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (const auto& e : row(i)) increment_[i] += e.p * e.beta;
}

void TransitionKernel::step(std::span<const double> pi, std::span<double> next) const {
  std::fill(next.begin(), next.end(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    const double mass = pi[i];
    if (mass == 0.0) continue;
    for (const auto& e : row(i)) next[e.target] += mass * e.p;
  }
}

TransitionKernel build_kernel(const StateSpace& space, Variant variant) {
  return build_kernel(space, variant, KernelFormulas::for_variant(variant));
}

TransitionKernel build_kernel(const StateSpace& space, Variant variant,
                              const KernelFormulas& formulas) {
  const auto& params = space.params();
  const auto n = space.size();

  struct Part {
    std::vector<std::uint64_t> counts;
    std::vector<Edge> edges;
  };
  std::vector<Part> parts(chunk_count(n));

  parallel_chunks(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& part = parts[chunk];
    part.counts.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      const auto k = space.state(static_cast<StateSpace::Index>(i));
      std::uint64_t row_edges = 0;
      for (std::size_t v = 0; v <= params.g; ++v) {
        const auto upto = std::min<std::size_t>(params.d, k[v]);
        for (std::size_t c = 1; c <= upto; ++c) {
          const double p = formulas.prob(k, v, c, params);
          if (!(p > 0.0)) continue;
          const auto next = formulas.gamma(k, v, c, params);
          const auto target = space.index_of(next);
          if (target == StateSpace::npos)
            throw ConsistencyError("successor of state " + std::to_string(i) + " under (v=" +
                                   std::to_string(v) + ", c=" + std::to_string(c) +
                                   ") is outside the state space");
          part.edges.push_back({target, static_cast<std::uint16_t>(v),
                                static_cast<std::uint16_t>(c), p, formulas.beta(k, v, c, params)});
          ++row_edges;
        }
      }
      part.counts.push_back(row_edges);
    }
  });

  std::vector<std::uint64_t> offsets;
  offsets.reserve(n + 1);
  offsets.push_back(0);
  std::size_t total = 0;
  for (const auto& part : parts) total += part.edges.size();
  std::vector<Edge> edges;
  edges.reserve(total);
  for (auto& part : parts) {
    for (auto count : part.counts) offsets.push_back(offsets.back() + count);
    edges.insert(edges.end(), part.edges.begin(), part.edges.end());
    part = Part{};
  }
  return TransitionKernel(variant, std::move(offsets), std::move(edges));
}

void write_kernel_json(std::ostream& out, const StateSpace& space, const TransitionKernel& kernel) {
  const auto& params = space.params();
  char buf[64];
  auto num = [&](double x) -> const char* {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  };
  out << "{\"m\":" << params.m << ",\"d\":" << params.d << ",\"g\":" << params.g
      << ",\"variant\":\"" << to_string(kernel.variant()) << "\",\"states\":[";
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i) out << ',';
    out << '[';
    const auto k = space.state(static_cast<StateSpace::Index>(i));
    for (std::size_t l = 0; l < k.size(); ++l) out << (l ? "," : "") << k[l];
    out << ']';
  }
  out << "],\"edges\":[";
  bool first = true;
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    for (const auto& e : kernel.row(i)) {
      if (!first) out << ',';
      first = false;
      out << '[' << i << ',' << e.target << ',' << e.v << ',' << e.c << ',' << num(e.p);
      out << ',' << num(e.beta) << ']';
    }
  }
  out << "]}\n";
}

}  // namespace cubound
