#include "cubound/sketch.hpp"

#include <algorithm>
#include <string>

namespace cubound {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::CU: return "cu";
    case Variant::LB: return "lb";
    case Variant::UB: return "ub";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "cu") return Variant::CU;
  if (name == "lb") return Variant::LB;
  if (name == "ub") return Variant::UB;
  throw ConfigError("unknown variant '" + std::string(name) + "' (expected cu, lb or ub)");
}

SketchConfig::SketchConfig(std::size_t m_, std::size_t d_) : m(m_), d(d_) {
  if (m < 2) throw ConfigError("m must be at least 2, got " + std::to_string(m));
  if (d < 1 || d > m)
    throw ConfigError("d must lie in [1, m], got d=" + std::to_string(d) +
                      " m=" + std::to_string(m));
}

SelectionSet::SelectionSet(const SketchConfig& config, std::vector<std::uint32_t> indices)
    : indices_(std::move(indices)) {
  if (indices_.size() != config.d)
    throw ConfigError("selection must contain exactly d=" + std::to_string(config.d) +
                      " indices, got " + std::to_string(indices_.size()));
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw ConfigError("selection contains a repeated index");
  if (!indices_.empty() && indices_.back() >= config.m)
    throw ConfigError("selection index " + std::to_string(indices_.back()) +
                      " out of range for m=" + std::to_string(config.m));
}

// --- CounterArray ---------------------------------------------------------

CounterArray::CounterArray(std::size_t m) : values_(m, 0), levels_{static_cast<std::uint32_t>(m)} {
  if (m == 0) throw ConfigError("counter array needs at least one counter");
}

CounterArray CounterArray::from_values(std::vector<Counter> values) {
  if (values.empty()) throw ConfigError("counter array needs at least one counter");
  const auto steps = *std::max_element(values.begin(), values.end());
  return from_values(std::move(values), steps);
}

CounterArray CounterArray::from_values(std::vector<Counter> values, std::uint64_t steps) {
  CounterArray out(values.size());
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi > steps) throw ConfigError("counter value exceeds the step count");
  out.min_ = *lo;
  out.levels_.assign(*hi - *lo + 1, 0);
  for (auto v : values) ++out.levels_[v - out.min_];
  out.values_ = std::move(values);
  out.steps_ = steps;
  return out;
}

void CounterArray::check(const SelectionSet& s) const {
  if (s.size() == 0) throw ConfigError("empty selection");
  if (s.indices().back() >= values_.size())
    throw ConfigError("selection index " + std::to_string(s.indices().back()) +
                      " out of range for m=" + std::to_string(values_.size()));
}

Counter CounterArray::query(const SelectionSet& s) const {
  check(s);
  Counter best = values_[s.indices()[0]];
  for (auto u : s) best = std::min(best, values_[u]);
  return best;
}

void CounterArray::bump(std::size_t index) {
  const auto level = values_[index] - min_;
  --levels_[level];
  if (level + 1 == levels_.size()) levels_.push_back(0);
  ++levels_[level + 1];
  ++values_[index];
}

void CounterArray::drop_empty_bottom() {
  while (levels_.front() == 0) {
    levels_.pop_front();
    ++min_;
  }
}

std::size_t CounterArray::cu_update(const SelectionSet& s) {
  const Counter lowest = query(s);
  std::size_t bumped = 0;
  for (auto u : s) {
    if (values_[u] == lowest) {
      bump(u);
      ++bumped;
    }
  }
  drop_empty_bottom();
  ++steps_;
  return bumped;
}

std::size_t CounterArray::increment_all_equal(Counter value) {
  std::size_t bumped = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == value) {
      bump(i);
      ++bumped;
    }
  }
  drop_empty_bottom();
  return bumped;
}

Counter query(const CounterArray& counters, const SelectionSet& s) { return counters.query(s); }

Counter gap(const CounterArray& counters) {
  const auto v = counters.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

DeltaState delta_of(const CounterArray& counters) {
  const auto v = counters.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  DeltaState k(*hi - *lo + 1, 0);
  for (auto x : v) ++k[x - *lo];
  return k;
}

CounterArray cu_update(CounterArray counters, const SelectionSet& s) {
  counters.cu_update(s);
  return counters;
}

// --- Capped variants ------------------------------------------------------

CappedSketch::CappedSketch(std::size_t m, std::uint64_t g, Variant variant)
    : counters_(m), g_(g), variant_(variant) {
  if (g == 0) throw ConfigError("gap cap g must be at least 1");
  if (variant == Variant::CU) throw ConfigError("a capped sketch must be LB or UB");
}

CappedSketch::CappedSketch(CounterArray counters, std::uint64_t g, Variant variant)
    : CappedSketch(counters.size(), g, variant) {
  if (counters.gap() > g) throw ConfigError("counter gap exceeds the cap g");
  counters_ = std::move(counters);
}

std::size_t CappedSketch::update(const SelectionSet& s) {
  const bool at_cap = counters_.gap() == g_ && counters_.query(s) == counters_.max();
  if (!at_cap) return counters_.cu_update(s);
  if (variant_ == Variant::LB) {
    counters_.skip_step();
    return 0;
  }
  // Selected counters all sit at the maximum, so the minimum counters are
  // untouched by the CU step and still hold the pre-update minimum.
  const Counter lowest = counters_.min();
  const auto bumped = counters_.cu_update(s);
  return bumped + counters_.increment_all_equal(lowest);
}

CappedSketch lb_update(CappedSketch state, const SelectionSet& s) {
  if (state.variant() != Variant::LB) throw ConfigError("lb_update on a non-LB sketch");
  state.update(s);
  return state;
}

CappedSketch ub_update(CappedSketch state, const SelectionSet& s) {
  if (state.variant() != Variant::UB) throw ConfigError("ub_update on a non-UB sketch");
  state.update(s);
  return state;
}

Sketch::Sketch(std::size_t m, Variant variant, std::uint64_t g)
    : variant_(variant),
      impl_(variant == Variant::CU ? std::variant<CounterArray, CappedSketch>(CounterArray(m))
                                   : std::variant<CounterArray, CappedSketch>(
                                         CappedSketch(m, g, variant))) {}

std::size_t Sketch::update(const SelectionSet& s) {
  return std::visit(
      [&](auto& impl) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(impl)>, CounterArray>)
          return impl.cu_update(s);
        else
          return impl.update(s);
      },
      impl_);
}

const CounterArray& Sketch::counters() const noexcept {
  if (const auto* plain = std::get_if<CounterArray>(&impl_)) return *plain;
  return std::get<CappedSketch>(impl_).counters();
}

// --- Selection ------------------------------------------------------------

UniformSelector::UniformSelector(const SketchConfig& config) : config_(config), perm_(config.m) {
  for (std::size_t i = 0; i < perm_.size(); ++i) perm_[i] = static_cast<std::uint32_t>(i);
}

SelectionSet UniformSelector::operator()(Rng& rng) {
  const auto m = config_.m;
  std::vector<std::uint32_t> picked(config_.d);
  for (std::size_t i = 0; i < config_.d; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, m - 1);
    std::swap(perm_[i], perm_[pick(rng)]);
    picked[i] = perm_[i];
  }
  return SelectionSet(config_, std::move(picked));
}

SelectionSet uniform_select(const SketchConfig& config, Rng& rng) {
  UniformSelector selector(config);
  return selector(rng);
}

}  // namespace cubound
