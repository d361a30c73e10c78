// Major-arc construction, arc-local approximations, the truncated singular
// integral, exact-phase grids, and minor-arc moments. Quadrature results are
// cross-checked against independent trapezoid evaluations assembled inside
// this file, and grid averages against direct counting.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "microsq/circle_method.hpp"

using namespace microsq;

namespace {

// Independent trapezoid evaluation of the truncated singular integral
//   Y * integral over |beta| <= W/X of v(beta)^2 e(-beta n) d beta.
double trapezoid_singular_integral(std::int64_t n, double cutoff, const ThetaParams& tp,
                                   std::int64_t steps) {
  const double bound = cutoff / tp.scale;
  const double h = 2.0 * bound / static_cast<double>(steps);
  double sum = 0.0;
  for (std::int64_t t = 0; t <= steps; ++t) {
    const double beta = -bound + h * static_cast<double>(t);
    const Complex v = oscillatory_integral(beta, tp);
    const double w = (t == 0 || t == steps) ? 0.5 : 1.0;
    sum += w * (v * v * unit_phase(-beta * static_cast<double>(n))).real();
  }
  return sum * h * static_cast<double>(tp.micro_limit);
}

// Independent trapezoid evaluation of the arc integral of f^2 g e(-n alpha).
double trapezoid_arc_integral(std::int64_t n, const ArcSystem& sys, const ThetaParams& tp,
                              std::int64_t steps_per_arc) {
  double total = 0.0;
  for (const auto& arc : sys.arcs) {
    const double lo = arc.lower(), hi = arc.upper();
    const double h = (hi - lo) / static_cast<double>(steps_per_arc);
    for (std::int64_t t = 0; t <= steps_per_arc; ++t) {
      const double alpha = lo + h * static_cast<double>(t);
      const Complex f = main_sum(alpha, tp);
      const Complex g = micro_sum(alpha, tp);
      const double phase = alpha * static_cast<double>(n);
      const Complex e = unit_phase(-(phase - std::floor(phase)));
      const double w = (t == 0 || t == steps_per_arc) ? 0.5 : 1.0;
      total += w * h * (f * f * g * e).real();
    }
  }
  return total;
}

}  // namespace

TEST_CASE("major arc systems have the prescribed shape", "[circle]") {
  const ArcSystem one = build_major_arcs(1e4, 1.0);
  REQUIRE(one.arcs.size() == 2);
  CHECK(one.arcs[0].num == 0);
  CHECK(one.arcs[0].den == 1);
  CHECK(one.arcs[1].num == 1);
  CHECK(one.arcs[1].den == 1);
  CHECK(one.arcs[0].half_width == Catch::Approx(1e-4));
  CHECK(one.major_measure == Catch::Approx(2e-4));
  CHECK(one.major_measure + one.minor_measure == Catch::Approx(1.0));

  const ArcSystem sys = build_major_arcs(1e6, 3.0);
  REQUIRE(sys.arcs.size() == 5);  // 0/1, 1/3, 1/2, 2/3, 1/1
  CHECK(sys.arcs[1].num == 1);
  CHECK(sys.arcs[1].den == 3);
  CHECK(sys.arcs[2].num == 1);
  CHECK(sys.arcs[2].den == 2);
  // Total measure (2W/X) * sum of phi(q) for q <= W; the q = 1 halves rejoin.
  CHECK(sys.major_measure == Catch::Approx(2.0 * 3.0 / 1e6 * (1 + 1 + 2)));

  const ArcSystem ten = build_major_arcs(1e6, 10.0);
  std::int64_t phi_sum = 0;
  for (std::int64_t q = 1; q <= 10; ++q) phi_sum += static_cast<std::int64_t>(euler_totient(q));
  REQUIRE(ten.arcs.size() == static_cast<std::size_t>(phi_sum) + 1);  // 33
  CHECK(ten.major_measure ==
        Catch::Approx(2.0 * 10.0 / 1e6 * static_cast<double>(phi_sum)));
  for (std::size_t i = 0; i + 1 < ten.arcs.size(); ++i)
    REQUIRE(ten.arcs[i].upper() < ten.arcs[i + 1].lower());  // pairwise disjoint

  CHECK(build_major_arcs(1e4, 17.0).arcs.size() > 2);        // 2 * 17^3 <= 1e4 holds
  CHECK_THROWS_AS(build_major_arcs(1e4, 18.0), std::invalid_argument);  // arcs would overlap
  CHECK_THROWS_AS(build_major_arcs(15.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_major_arcs(1e4, 0.5), std::invalid_argument);
}

TEST_CASE("major-arc membership agrees with a linear scan", "[circle]") {
  const ArcSystem sys = build_major_arcs(1e5, 8.0);
  for (std::int64_t t = 0; t <= 2000; ++t) {
    const double alpha = static_cast<double>(t) / 2000.0;
    bool inside = false;
    for (const auto& arc : sys.arcs) inside = inside || arc.contains(alpha);
    REQUIRE(sys.in_major(alpha) == inside);
  }
  // Points at and just beyond an arc edge.
  const FareyArc& arc = sys.arcs[3];
  CHECK(sys.in_major(arc.center()));
  CHECK(sys.in_major(arc.center() + arc.half_width * 0.999));
  CHECK_FALSE(sys.in_major(arc.center() + arc.half_width * 1.001));
}

TEST_CASE("arc-local approximations at arc centers", "[circle]") {
  const ThetaParams tp = ThetaParams::from_scale(1e4, 20);
  const ArcSystem sys = build_major_arcs(1e4, 5.0);
  const double half = static_cast<double>(tp.main_limit) / 2.0;
  for (const auto& arc : sys.arcs) {
    const Complex expected_f =
        gauss_sum(arc.den, arc.num) / static_cast<double>(arc.den) * half;
    const Complex expected_g = gauss_sum(arc.den, arc.num) / static_cast<double>(arc.den) *
                               static_cast<double>(tp.micro_limit);
    REQUIRE(std::abs(main_sum_approx(arc.center(), arc, tp) - expected_f) < 1e-9);
    REQUIRE(std::abs(micro_sum_approx(arc.center(), arc, tp) - expected_g) < 1e-9);
  }
  // At 0/1 the approximations are P/2 and Y; at 1/2 the Gauss sum vanishes.
  CHECK(std::abs(main_sum_approx(0.0, sys.arcs.front(), tp) - Complex(half, 0)) < 1e-12);
  const FareyArc* half_arc = nullptr;
  for (const auto& a : sys.arcs)
    if (a.den == 2) half_arc = &a;
  REQUIRE(half_arc != nullptr);
  CHECK(std::abs(main_sum_approx(0.5, *half_arc, tp)) < 1e-12);
  CHECK_THROWS_AS(main_sum_approx(0.25, sys.arcs.front(), tp), std::invalid_argument);
  CHECK_THROWS_AS(micro_sum_approx(0.25, sys.arcs.front(), tp), std::invalid_argument);
}

TEST_CASE("singular integral: real, bounded, and quadrature-stable", "[circle]") {
  const ThetaParams tp = ThetaParams::from_scale(1e4, 20);
  const double half = static_cast<double>(tp.main_limit) / 2.0;
  for (double cutoff : {1.0, 5.0}) {
    SingularIntegralPlan plan(tp, cutoff);
    CHECK(plan.cutoff() == cutoff);
    const double cap = static_cast<double>(tp.micro_limit) * 2.0 * cutoff / tp.scale * half * half;
    for (std::int64_t n : {5001, 7321, 9973}) {
      const double j = plan.evaluate(n);
      REQUIRE(std::abs(j) <= cap + 1e-9);
      const double trap = trapezoid_singular_integral(n, cutoff, tp, 8192);
      REQUIRE(std::abs(j - trap) < 5e-3 * (1.0 + std::abs(j)));
      REQUIRE(singular_integral(n, cutoff, tp) == j);
    }
    // Doubling the panel density must not move the result.
    SingularIntegralPlan fine(tp, cutoff, 2);
    CHECK(fine.node_count() == 2 * plan.node_count());
    for (std::int64_t n : {5001, 9973})
      REQUIRE(std::abs(fine.evaluate(n) - plan.evaluate(n)) < 1e-6 * (1.0 + std::abs(plan.evaluate(n))));
  }
  SingularIntegralPlan plan(tp, 1.0);
  CHECK(plan.node_count() == 48 * 16);
  CHECK_THROWS_AS(plan.evaluate(0), std::invalid_argument);
  CHECK_THROWS_AS(plan.evaluate(10001), std::invalid_argument);
  CHECK_THROWS_AS(SingularIntegralPlan(tp, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SingularIntegralPlan(tp, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(SingularIntegralPlan(tp, 1.0, 65), std::invalid_argument);
}

TEST_CASE("major-arc quadrature matches an independent trapezoid", "[circle]") {
  const ThetaParams tp = ThetaParams::from_scale(1e4, 10);
  const double cutoff = 2.0;
  const MajorArcPlan plan(tp, cutoff);
  const MajorArcPlan fine(tp, cutoff, 16.0);
  const ArcSystem sys = build_major_arcs(tp.scale, cutoff);
  for (std::int64_t n : {5003, 8191, 9973}) {
    const double coarse = plan.integral(n);
    const double refined = fine.integral(n);
    const double reference = trapezoid_arc_integral(n, sys, tp, 512);
    REQUIRE(std::abs(refined - reference) < 2e-2 * (1.0 + std::abs(reference)));
    REQUIRE(std::abs(coarse - refined) < 6e-2 * (1.0 + std::abs(refined)));
  }

  // compare() multiplies the two truncations and reports the difference.
  SingularIntegralPlan jplan(tp, cutoff);
  const MajorArcComparison cmp = plan.compare(9973, jplan);
  CHECK(cmp.series_truncation == Catch::Approx(singular_series_additive(9973, cutoff)));
  CHECK(cmp.integral_truncation == Catch::Approx(jplan.evaluate(9973)));
  CHECK(cmp.predicted == Catch::Approx(cmp.series_truncation * cmp.integral_truncation));
  CHECK(cmp.difference == Catch::Approx(cmp.arc_integral - cmp.predicted));

  const MajorArcComparison top = major_arc_value(9973, tp, cutoff);
  CHECK(top.arc_integral == Catch::Approx(cmp.arc_integral));
  CHECK_THROWS_AS(major_arc_value(5000, tp, cutoff), std::invalid_argument);
  CHECK_THROWS_AS(major_arc_value(10001, tp, cutoff), std::invalid_argument);
}

TEST_CASE("exact-phase grid recovers representation counts", "[circle]") {
  const ThetaParams tp = ThetaParams::from_scale(1e4, 20);
  const std::int64_t m =
      2 * (2 * tp.main_limit * tp.main_limit + tp.micro_limit * tp.micro_limit) + 1;
  const ThetaGrid grid(tp, m);
  CHECK(grid.points() == 40801);
  for (std::int64_t n : {5002, 6251, 7500, 8066, 9999}) {
    const double integral = grid.representation_integral(n);
    const double count = static_cast<double>(main_range_triple_count(n, tp));
    REQUIRE(std::abs(integral - count) < 1e-6);
  }
  CHECK_THROWS_AS(ThetaGrid(tp, 1), std::invalid_argument);
  CHECK_THROWS_AS(ThetaGrid(tp, (std::int64_t(1) << 26) + 1), std::invalid_argument);
}

TEST_CASE("grid generating sums match the real-frequency evaluations", "[circle]") {
  const ThetaParams tp = ThetaParams::from_scale(2500, 10);
  const ThetaGrid grid(tp, 2001);
  for (std::int64_t j : {0, 1, 13, 1000, 2000}) {
    const double alpha = static_cast<double>(j) / 2001.0;
    REQUIRE(std::abs(grid.main_value(j) - main_sum(alpha, tp)) < 1e-8);
    REQUIRE(std::abs(grid.micro_value(j) - micro_sum(alpha, tp)) < 1e-8);
  }
}

TEST_CASE("fourth moments equal their pair-collision counts", "[circle]") {
  // Micro moment: ordered quadruples with y1^2 + y2^2 = y3^2 + y4^2.
  const ThetaParams tp = ThetaParams::from_scale(1e4, 20);
  const std::int64_t y = tp.micro_limit;
  const ThetaGrid micro_grid(tp, 8 * y * y + 1);
  std::map<std::int64_t, std::int64_t> pair_sums;
  for (std::int64_t y1 = 1; y1 <= y; ++y1)
    for (std::int64_t y2 = 1; y2 <= y; ++y2) ++pair_sums[y1 * y1 + y2 * y2];
  double collisions = 0.0;
  for (const auto& [s, c] : pair_sums) collisions += static_cast<double>(c) * static_cast<double>(c);
  REQUIRE(std::abs(micro_grid.micro_fourth_moment() - collisions) < 1e-6);

  // Main moment: same identity over the dyadic main range.
  const std::int64_t m =
      2 * (2 * tp.main_limit * tp.main_limit + tp.micro_limit * tp.micro_limit) + 1;
  const ThetaGrid grid(tp, m);
  std::map<std::int64_t, std::int64_t> main_sums;
  for (std::int64_t x1 = tp.main_first(); x1 <= tp.main_limit; ++x1)
    for (std::int64_t x2 = tp.main_first(); x2 <= tp.main_limit; ++x2) ++main_sums[x1 * x1 + x2 * x2];
  double main_collisions = 0.0;
  for (const auto& [s, c] : main_sums)
    main_collisions += static_cast<double>(c) * static_cast<double>(c);
  REQUIRE(std::abs(grid.main_fourth_moment() - main_collisions) < 1e-5);
}

TEST_CASE("minor-arc moment is the full moment minus the major arcs", "[circle]") {
  const ThetaParams tp = ThetaParams::from_scale(2500, 10);
  const MinorArcMoment m = minor_arc_moment(tp, 4.0);
  CHECK(m.grid_points == 8 * 2500 + 1);
  REQUIRE(m.value > 0.0);

  const ThetaGrid grid(tp, m.grid_points);
  const ArcSystem arcs = build_major_arcs(tp.scale, 4.0);
  const double full = grid.mixed_moment(nullptr);
  const double minor = grid.mixed_moment(&arcs);
  CHECK(m.value == Catch::Approx(minor));
  REQUIRE(minor < full);
  CHECK(m.minor_measure == Catch::Approx(arcs.minor_measure));
  const double x = tp.scale, yy = static_cast<double>(tp.micro_limit);
  CHECK(m.reference == Catch::Approx(x * yy * std::log(x) + x * yy * yy / 4.0));
  CHECK(m.ratio == Catch::Approx(m.value / m.reference));
}
