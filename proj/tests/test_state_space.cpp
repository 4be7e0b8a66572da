#include "doctest.h"

#include <algorithm>
#include <functional>
#include <set>

#include "cubound/binomial.hpp"
#include "cubound/state_space.hpp"

using namespace cubound;

namespace {

using K = std::vector<std::uint32_t>;

K at(const StateSpace& s, std::size_t i) {
  auto k = s.state(static_cast<StateSpace::Index>(i));
  return {k.begin(), k.end()};
}

// Every length-(g+1) composition of m, filtered by membership.
std::set<K> brute_members(const ChainParams& p) {
  std::set<K> out;
  K k(p.g + 1, 0);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t l, std::uint32_t left) {
    if (l == p.g) {
      k[l] = left;
      if (is_member(k, p)) out.insert(k);
      return;
    }
    for (std::uint32_t x = 0; x <= left; ++x) {
      k[l] = x;
      rec(l + 1, left - x);
    }
  };
  rec(0, static_cast<std::uint32_t>(p.m));
  return out;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(StateSpace(ChainParams{3, 2, 0}), ConfigError);
  CHECK_THROWS_AS(StateSpace(ChainParams{1, 1, 1}), ConfigError);
  CHECK_THROWS_AS(StateSpace(ChainParams{3, 4, 1}), ConfigError);
  CHECK_THROWS_AS(StateSpace(ChainParams{3, 0, 1}), ConfigError);
}

TEST_CASE("m=3 d=2 g=1") {
  const StateSpace s(ChainParams{3, 2, 1});
  REQUIRE(s.size() == 2);
  CHECK(at(s, 0) == K{3, 0});
  CHECK(at(s, 1) == K{1, 2});
  CHECK(s.index_of(K{1, 2}) == 1);
  CHECK(s.index_of(K{2, 1}) == StateSpace::npos);
  CHECK(s.index_of(K{1, 2, 0}) == StateSpace::npos);
}

TEST_CASE("m = d gives a single state") {
  for (std::size_t g = 1; g <= 4; ++g) {
    const StateSpace s(ChainParams{5, 5, g});
    REQUIRE(s.size() == 1);
    K expect(g + 1, 0);
    expect[0] = 5;
    CHECK(at(s, 0) == expect);
  }
}

TEST_CASE("count formula") {
  CHECK(state_count(ChainParams{50, 4, 5}) == 2349060);
  CHECK(state_count(ChainParams{50, 4, 1}) == 47);
  CHECK(state_count(ChainParams{50, 4, 4}) == 230300);
}

TEST_CASE("enumeration matches exhaustive search, m <= 12, g <= 4") {
  for (std::size_t m = 2; m <= 12; ++m)
    for (std::size_t d = 1; d <= m; ++d)
      for (std::size_t g = 1; g <= 4; ++g) {
        const ChainParams p{m, d, g};
        const StateSpace s(p);
        const auto expect = brute_members(p);
        REQUIRE(s.size() == expect.size());
        REQUIRE(s.size() == state_count(p));
        REQUIRE(s.size() == static_cast<std::size_t>(*binomial_exact(m + g - d, g)));
        std::set<K> got;
        for (std::size_t i = 0; i < s.size(); ++i) {
          got.insert(at(s, i));
          REQUIRE(s.index_of(at(s, i)) == i);
        }
        REQUIRE(got == expect);
      }
}

TEST_CASE("enumeration order: top level ascending, then descending") {
  const StateSpace s(ChainParams{7, 2, 3});
  K expect0(4, 0);
  expect0[0] = 7;
  CHECK(at(s, 0) == expect0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    const auto a = at(s, i - 1), b = at(s, i);
    const auto la = top_level(a), lb = top_level(b);
    REQUIRE(la <= lb);
    if (la == lb) REQUIRE(std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()));
  }
}

TEST_CASE("wide keys fall back to the string index") {
  // 2^20 counters need 21 bits per entry; with g = 4 that exceeds 64 bits.
  const StateSpace s(ChainParams{(1u << 20), (1u << 20) - 1, 4});
  CHECK(s.size() == state_count(ChainParams{(1u << 20), (1u << 20) - 1, 4}));
  for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(s.index_of(at(s, i)) == i);
}

TEST_CASE("enumerate_states is deterministic") {
  const auto a = enumerate_states(9, 3, 3), b = enumerate_states(9, 3, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(at(a, i) == at(b, i));
}
