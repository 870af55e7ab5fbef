#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <random>

#include "patchrot/projective.hpp"
#include "test_helpers.hpp"

using namespace patchrot;

TEST_CASE("to_patch divides by the pivot and drops its slot", "[projective]") {
  const HomogeneousPoint<3> p{{2.0, -4.0, 6.0, 8.0}};
  const auto x0 = to_patch<3>(p, 0);
  CHECK(x0 == std::array<double, 3>{-2.0, 3.0, 4.0});
  const auto x2 = to_patch<3>(p, 2);
  CHECK(x2 == std::array<double, 3>{2.0 / 6.0, -4.0 / 6.0, 8.0 / 6.0});
}

TEST_CASE("to_patch rejects points outside the patch", "[projective]") {
  const HomogeneousPoint<3> p{{0.0, 1.0, 0.0, 0.0}};
  CHECK_THROWS_AS(to_patch<3>(p, 0), std::domain_error);
  CHECK_NOTHROW(to_patch<3>(p, 1));
  // Subnormal pivots sit below the denominator floor.
  const HomogeneousPoint<3> tiny{{1e-310, 1.0, 0.0, 0.0}};
  CHECK_THROWS_AS(to_patch<3>(tiny, 0), std::domain_error);
}

TEST_CASE("from_patch re-inserts 1 at the pivot slot", "[projective]") {
  const std::array<double, 3> x{0.5, -0.25, 2.0};
  const auto p1 = from_patch<3>(x, 1);
  CHECK(p1.z == std::array<double, 4>{0.5, 1.0, -0.25, 2.0});
  const auto p3 = from_patch<3>(x, 3);
  CHECK(p3.z == std::array<double, 4>{0.5, -0.25, 2.0, 1.0});
}

TEST_CASE("chart round-trip is bitwise exact", "[projective]") {
  // to_patch after from_patch only ever divides by the re-inserted 1.
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<double, 3> x{testutil::uniform(rng, -50, 50), testutil::uniform(rng, -50, 50),
                            testutil::uniform(rng, -50, 50)};
    for (std::size_t k = 0; k <= 3; ++k) {
      const auto back = to_patch<3>(from_patch<3>(x, k), k);
      REQUIRE(testutil::same_bits(back[0], x[0]));
      REQUIRE(testutil::same_bits(back[1], x[1]));
      REQUIRE(testutil::same_bits(back[2], x[2]));
    }
  }
}

TEST_CASE("generic dimension: RP^2 charts round-trip too", "[projective]") {
  const std::array<double, 2> x{3.5, -0.75};
  for (std::size_t k = 0; k <= 2; ++k) {
    CHECK(to_patch<2>(from_patch<2>(x, k), k) == x);
  }
  const HomogeneousPoint<2> p{{4.0, 2.0, -8.0}};
  CHECK(best_patch<2>(p) == 2);
}

TEST_CASE("best_patch picks the largest magnitude, ties to smallest index",
          "[projective]") {
  CHECK(best_patch<3>({{1.0, -1.0, 1.0, 1.0}}) == 0);
  CHECK(best_patch<3>({{0.5, -0.7, 0.7, 0.0}}) == 1);
  CHECK(best_patch<3>({{0.0, 0.0, 0.0, -0.1}}) == 3);
  CHECK_THROWS_AS(best_patch<3>({{0.0, 0.0, 0.0, 0.0}}), std::domain_error);
}

TEST_CASE("needs_switch compares strictly", "[projective]") {
  CHECK_FALSE(needs_switch<3>({2.0, -2.0, 0.0}, 2.0));
  CHECK(needs_switch<3>({2.0000001, 0.0, 0.0}, 2.0));
  CHECK(needs_switch<3>({0.0, -2.1, 0.0}, 2.0));
  CHECK_FALSE(needs_switch<3>({0.9, 0.9, 0.9}, 1.0));
}

TEST_CASE("switch_patch lands inside the unit box and preserves the point",
          "[projective]") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::array<double, 3> x{testutil::uniform(rng, -8, 8), testutil::uniform(rng, -8, 8),
                                  testutil::uniform(rng, -8, 8)};
    const std::size_t k_from = rng() & 3;
    const PatchPoint<3> moved = switch_patch<3>(x, k_from);
    for (double c : moved.x) REQUIRE(std::fabs(c) <= 1.0);
    REQUIRE(projectively_equal<3>(from_patch<3>(x, k_from),
                                  from_patch<3>(moved.x, moved.patch_index), 1e-12));
  }
}

TEST_CASE("switch_patch is the identity when already in the best patch", "[projective]") {
  const std::array<double, 3> x{0.25, -0.5, 0.75};
  const PatchPoint<3> moved = switch_patch<3>(x, 2);
  CHECK(moved.patch_index == 2);
  CHECK(moved.x == x);  // divides by 1 only
}

TEST_CASE("projectively_equal ignores scale and overall sign", "[projective]") {
  const HomogeneousPoint<3> a{{1.0, -2.0, 0.5, 0.0}};
  const HomogeneousPoint<3> b{{-3.7, 7.4, -1.85, -0.0}};
  CHECK(projectively_equal<3>(a, b));
  const HomogeneousPoint<3> c{{1.0, -2.0, 0.6, 0.0}};
  CHECK_FALSE(projectively_equal<3>(a, c));
}
