#include <doctest.h>

#include <algorithm>
#include <chrono>

#include "hazedefy/morphology.hpp"
#include "test_support.hpp"

using namespace hazedefy;
using hazedefy::testing::random_map;

TEST_CASE("min_filter of a constant map is the constant") {
  const ScalarMap m(11, 6, 0.6f);
  for (int r : {0, 1, 3, 7, 20}) CHECK(min_filter(m, PatchRadius(r)) == m);
}

TEST_CASE("a single dark pixel erodes to the window footprint") {
  for (auto [px, py] : {std::pair{20, 15}, {2, 3}, {39, 29}}) {
    ScalarMap m(40, 30, 1.0f);
    m(px, py) = 0.0f;
    const ScalarMap out = min_filter(m, PatchRadius(7));
    for (int y = 0; y < 30; ++y) {
      for (int x = 0; x < 40; ++x) {
        const bool inside = std::abs(x - px) <= 7 && std::abs(y - py) <= 7;
        CHECK(out(x, y) == (inside ? 0.0f : 1.0f));
      }
    }
  }
}

TEST_CASE("min_filter matches the naive scan on a 32x24 map, radius 7") {
  std::mt19937_64 rng(11);
  const ScalarMap m = random_map(32, 24, rng);
  CHECK(min_filter(m, PatchRadius(7)) == min_filter_naive(m, PatchRadius(7)));
}

TEST_CASE("min_filter_naive edge cases") {
  std::mt19937_64 rng(3);
  const ScalarMap m = random_map(9, 5, rng);
  CHECK(min_filter_naive(m, PatchRadius(0)) == m);

  const ScalarMap one(1, 1, 0.42f);
  for (int r : {0, 1, 9}) CHECK(min_filter_naive(one, PatchRadius(r)) == one);

  // 1x8 increasing ramp, radius 2: each output is the value two to the left.
  ScalarMap ramp(8, 1);
  for (int x = 0; x < 8; ++x) ramp(x, 0) = 0.1f * static_cast<float>(x);
  const ScalarMap out = min_filter_naive(ramp, PatchRadius(2));
  for (int x = 0; x < 8; ++x) CHECK(out(x, 0) == ramp(std::max(x - 2, 0), 0));
}

TEST_CASE("PatchRadius validation and default window") {
  CHECK(PatchRadius().window() == 15);
  CHECK_THROWS_AS(PatchRadius(-1), std::invalid_argument);
}

TEST_CASE("property: min_filter equals the naive oracle bit for bit") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> wd(1, 64);
  std::uniform_int_distribution<int> hd(1, 48);
  std::uniform_int_distribution<int> rd(0, 9);
  for (int i = 0; i < 200; ++i) {
    const ScalarMap m = random_map(wd(rng), hd(rng), rng);
    const PatchRadius r(rd(rng));
    const ScalarMap fast = min_filter(m, r);
    REQUIRE(fast == min_filter_naive(m, r));
    for (std::size_t k = 0; k < m.size(); ++k) REQUIRE(fast.data()[k] <= m.data()[k]);
  }
}

TEST_CASE("property: erosion radii compose additively") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> rd(0, 6);
  for (int i = 0; i < 50; ++i) {
    const ScalarMap m = random_map(37, 29, rng);
    const int r1 = rd(rng);
    const int r2 = rd(rng);
    CHECK(min_filter(min_filter(m, PatchRadius(r1)), PatchRadius(r2)) == min_filter(m, PatchRadius(r1 + r2)));
  }
}

TEST_CASE("min_filter runtime does not grow with the radius") {
  std::mt19937_64 rng(5);
  const ScalarMap m = random_map(640, 480, rng);
  auto best_ms = [&](int r) {
    double best = 1e30;
    for (int i = 0; i < 9; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      const ScalarMap out = min_filter(m, PatchRadius(r));
      const auto t1 = std::chrono::steady_clock::now();
      REQUIRE(out.size() == m.size());
      best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
  };
  const double small = best_ms(1);
  const double large = best_ms(15);
  MESSAGE("radius 1: " << small << " ms, radius 15: " << large << " ms");
  CHECK(large <= 2.0 * small);
  CHECK(small <= 2.0 * large);
}
