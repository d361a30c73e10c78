// Sphere lattice points, exact integer minimum separations, and normalized
// spacing scans, checked against raw triple enumeration.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "microsq/representations.hpp"
#include "microsq/sphere.hpp"

using namespace microsq;

namespace {

std::vector<std::array<std::int64_t, 3>> brute_points(std::int64_t n) {
  std::vector<std::array<std::int64_t, 3>> out;
  const std::int64_t r = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(n)));
  for (std::int64_t x = -r; x <= r; ++x)
    for (std::int64_t y = -r; y <= r; ++y) {
      const std::int64_t rest = n - x * x - y * y;
      if (rest < 0) continue;
      std::uint64_t root = 0;
      if (!is_square(static_cast<std::uint64_t>(rest), &root)) continue;
      const std::int64_t z = static_cast<std::int64_t>(root);
      out.push_back({x, y, z});
      if (z != 0) out.push_back({x, y, -z});
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("lattice point sets match brute enumeration", "[sphere]") {
  CHECK(lattice_points(1).count() == 6);
  CHECK(lattice_points(2).count() == 12);
  CHECK(lattice_points(3).count() == 8);
  CHECK(lattice_points(4).count() == 6);
  CHECK(lattice_points(7).count() == 0);
  CHECK(lattice_points(9).count() == 30);
  CHECK_THROWS_AS(lattice_points(0), std::invalid_argument);

  for (std::int64_t n = 1; n <= 2000; ++n) {
    auto pts = lattice_points(n).points;
    std::sort(pts.begin(), pts.end());
    const auto expected = brute_points(n);
    REQUIRE(pts == expected);
    // No duplicates and all on the sphere is implied by the set equality, but
    // assert the invariants directly for clarity.
    REQUIRE(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
    for (const auto& p : pts) REQUIRE(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] == n);
  }
}

TEST_CASE("all-pairs and sweep separations agree", "[sphere]") {
  for (std::int64_t n = 1; n <= 3000; ++n) {
    const SpherePointSet set = lattice_points(n);
    const auto a = detail::min_sep_sq_all_pairs(set.points);
    const auto b = detail::min_sep_sq_sweep(set.points);
    REQUIRE(a == b);
    REQUIRE(min_pair_separation_sq(set) == a);
    if (a) {
      REQUIRE(*a >= 2);  // equal norms force |P - Q|^2 != 1
    } else {
      REQUIRE(set.points.size() < 2);
    }
  }
}

TEST_CASE("hand-checked spacings and metric variants", "[sphere]") {
  CHECK(min_spacing(1, SpacingMetric::Euclidean) ==
        Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(min_spacing(2, SpacingMetric::Euclidean) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(min_spacing(2, SpacingMetric::SquaredEuclidean) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(min_spacing(7, SpacingMetric::Euclidean).has_value());
  for (std::int64_t n : {5, 50, 101, 1009}) {
    const auto e = min_spacing(n, SpacingMetric::Euclidean);
    const auto s = min_spacing(n, SpacingMetric::SquaredEuclidean);
    REQUIRE(e.has_value());
    REQUIRE(*s == Catch::Approx(*e * *e).epsilon(1e-12));
    REQUIRE(*e >= std::sqrt(2.0 / static_cast<double>(n)) - 1e-12);
  }
}

TEST_CASE("quadrupling the radius squared preserves the count", "[sphere]") {
  for (std::int64_t n = 1; n <= 5000; ++n)
    REQUIRE(lattice_points(4 * n).count() == lattice_points(n).count());
}

TEST_CASE("a capped representation forces close pairs", "[sphere]") {
  // If n = a^2 + b^2 + y^2 with a, b >= 1 then (a, b, y) and (a, b, -y) are
  // distinct points at squared distance 4 y^2, so the integer minimum
  // separation is at most 4 y_min^2.
  for (std::int64_t n = 2; n <= 5000; ++n) {
    const auto y = min_microsquare(n);
    if (!y) continue;
    const auto d2 = min_pair_separation_sq(lattice_points(n));
    REQUIRE(d2.has_value());
    REQUIRE(*d2 <= 4 * *y * *y);
    REQUIRE(*d2 >= 2);
  }
}

TEST_CASE("spacing scans and violation fractions", "[sphere]") {
  const auto records = spacing_scan(1, 10, SpacingMetric::Euclidean);
  REQUIRE(records.size() == 10);
  CHECK(records[0].n == 1);
  CHECK(records[0].count == 6);
  CHECK(records[0].spacing == Catch::Approx(std::sqrt(2.0)));
  CHECK_FALSE(records[0].normalized.has_value());  // log 1 = 0 excluded
  CHECK(records[6].n == 7);
  CHECK(records[6].count == 0);
  CHECK_FALSE(records[6].spacing.has_value());
  for (const auto& r : records)
    if (r.spacing && r.n >= 2)
      CHECK(*r.normalized ==
            Catch::Approx(*r.spacing * static_cast<double>(r.n) /
                          std::pow(std::log(static_cast<double>(r.n)), 1.01)));
  CHECK_THROWS_AS(spacing_scan(0, 5, SpacingMetric::Euclidean), std::invalid_argument);
  CHECK_THROWS_AS(spacing_scan(5, 4, SpacingMetric::Euclidean), std::invalid_argument);

  const auto wide = spacing_scan(2, 200, SpacingMetric::Euclidean);
  const std::vector<double> constants{0.0, 0.5, 2.0, 1e9};
  const auto fractions = spacing_violation_fractions(wide, constants);
  REQUIRE(fractions.size() == 4);
  CHECK(fractions[0] == 1.0);   // every normalized spacing exceeds 0
  CHECK(fractions[3] == 0.0);
  for (std::size_t i = 0; i + 1 < fractions.size(); ++i)
    REQUIRE(fractions[i] >= fractions[i + 1]);  // monotone in the constant
}
