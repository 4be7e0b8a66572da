#pragma once

// Single-row count-min sketch with conservative updates (CU) and the two
// gap-capped variants LB and UB. Counter indices are 0-based.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cubound/errors.hpp"

namespace cubound {

using Rng = std::mt19937_64;
using Counter = std::uint64_t;

enum class Variant { CU, LB, UB };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

/// Number of counters m and counters touched per item d; 1 <= d <= m, m >= 2.
struct SketchConfig {
  std::size_t m;
  std::size_t d;

  SketchConfig(std::size_t m, std::size_t d);
};

/// Exactly d distinct counter indices, kept sorted.
class SelectionSet {
 public:
  SelectionSet() = default;
  /// Validates size, range and distinctness against `config`; sorts.
  SelectionSet(const SketchConfig& config, std::vector<std::uint32_t> indices);

  std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  friend bool operator==(const SelectionSet&, const SelectionSet&) = default;

 private:
  std::vector<std::uint32_t> indices_;
};

/// Offset histogram k: k[l] is the number of counters exactly l above the
/// minimum. k[0] >= 1 and the entries sum to m.
using DeltaState = std::vector<std::uint32_t>;

/// The m counter values Y(t) together with the step count t.
///
/// The offset histogram is kept up to date on every increment, so min, max,
/// gap and the delta representation are available without rescanning.
class CounterArray {
 public:
  explicit CounterArray(std::size_t m);

  /// Builds an array from explicit values; steps defaults to max(values).
  static CounterArray from_values(std::vector<Counter> values);
  static CounterArray from_values(std::vector<Counter> values, std::uint64_t steps);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const Counter> values() const noexcept { return values_; }
  Counter operator[](std::size_t i) const { return values_[i]; }
  std::uint64_t steps() const noexcept { return steps_; }

  Counter min() const noexcept { return min_; }
  Counter max() const noexcept { return min_ + levels_.size() - 1; }
  Counter gap() const noexcept { return levels_.size() - 1; }

  /// Conservative update: every selected counter at the selection minimum is
  /// incremented. Advances the step count. Returns the number of increments.
  std::size_t cu_update(const SelectionSet& s);

  /// Increments every counter equal to `value` without advancing the step.
  std::size_t increment_all_equal(Counter value);

  /// Advances the step count without touching any counter.
  void skip_step() noexcept { ++steps_; }

  /// Smallest value among the selected counters.
  Counter query(const SelectionSet& s) const;

  DeltaState delta() const { return {levels_.begin(), levels_.end()}; }

  friend bool operator==(const CounterArray& a, const CounterArray& b) {
    return a.values_ == b.values_ && a.steps_ == b.steps_;
  }

 private:
  void bump(std::size_t index);
  void drop_empty_bottom();
  void check(const SelectionSet& s) const;

  std::vector<Counter> values_;
  std::uint64_t steps_ = 0;
  Counter min_ = 0;
  std::deque<std::uint32_t> levels_;
};

/// min over s of values[u].
Counter query(const CounterArray& counters, const SelectionSet& s);
/// max(values) - min(values).
Counter gap(const CounterArray& counters);
/// Offset histogram computed from a fresh scan of the values.
DeltaState delta_of(const CounterArray& counters);
/// Returns a copy of `counters` after one conservative update.
CounterArray cu_update(CounterArray counters, const SelectionSet& s);

/// LB or UB sketch with gap capped at g >= 1.
class CappedSketch {
 public:
  CappedSketch(std::size_t m, std::uint64_t g, Variant variant);
  /// Starts from existing counters, whose gap must not exceed g.
  CappedSketch(CounterArray counters, std::uint64_t g, Variant variant);

  const CounterArray& counters() const noexcept { return counters_; }
  std::uint64_t cap() const noexcept { return g_; }
  Variant variant() const noexcept { return variant_; }

  /// One step of the capped update. Returns the number of increments.
  std::size_t update(const SelectionSet& s);

 private:
  CounterArray counters_;
  std::uint64_t g_;
  Variant variant_;
};

CappedSketch lb_update(CappedSketch state, const SelectionSet& s);
CappedSketch ub_update(CappedSketch state, const SelectionSet& s);

/// Any of the three update rules behind one interface.
class Sketch {
 public:
  /// `g` is ignored for CU.
  Sketch(std::size_t m, Variant variant, std::uint64_t g = 0);

  std::size_t update(const SelectionSet& s);
  const CounterArray& counters() const noexcept;
  Variant variant() const noexcept { return variant_; }

 private:
  Variant variant_;
  std::variant<CounterArray, CappedSketch> impl_;
};

/// Draws uniform d-subsets of [0, m) with a partial Fisher-Yates shuffle.
/// The scratch permutation is carried between draws.
class UniformSelector {
 public:
  explicit UniformSelector(const SketchConfig& config);

  SelectionSet operator()(Rng& rng);
  const SketchConfig& config() const noexcept { return config_; }

 private:
  SketchConfig config_;
  std::vector<std::uint32_t> perm_;
};

SelectionSet uniform_select(const SketchConfig& config, Rng& rng);

/// Memoized ideal hashing: each item gets an independent uniform d-subset
/// on first sight and keeps it.
template <class Item = std::uint64_t>
class IdealHashTable {
 public:
  explicit IdealHashTable(const SketchConfig& config) : selector_(config) {}

  const SelectionSet& operator()(const Item& item, Rng& rng) {
    auto it = table_.find(item);
    if (it == table_.end()) it = table_.emplace(item, selector_(rng)).first;
    return it->second;
  }

  bool contains(const Item& item) const { return table_.contains(item); }
  std::size_t size() const noexcept { return table_.size(); }

 private:
  UniformSelector selector_;
  std::unordered_map<Item, SelectionSet> table_;
};

template <class Item>
const SelectionSet& ideal_hash(IdealHashTable<Item>& table, const Item& item, Rng& rng) {
  return table(item, rng);
}

}  // namespace cubound
