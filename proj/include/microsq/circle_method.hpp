#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "microsq/exp_sums.hpp"
#include "microsq/local_densities.hpp"
#include "microsq/util.hpp"

namespace microsq {

// One major arc: all alpha in [0, 1) within half_width of the reduced
// fraction num/den. The endpoint fractions 0/1 and 1/1 carry half-arcs
// clipped to [0, 1).
struct FareyArc {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double half_width = 0.0;

  double center() const { return static_cast<double>(num) / static_cast<double>(den); }
  double lower() const { return std::max(0.0, center() - half_width); }
  double upper() const { return std::min(1.0, center() + half_width); }
  bool contains(double alpha) const { return std::abs(alpha - center()) <= half_width; }
};

struct ArcSystem {
  double scale = 0.0;   // X
  double cutoff = 0.0;  // W
  std::vector<FareyArc> arcs;  // sorted by center; first is 0/1, last is 1/1
  double major_measure = 0.0;
  double minor_measure = 0.0;

  bool in_major(double alpha) const {
    // arcs are sorted by center and pairwise disjoint
    auto it = std::upper_bound(arcs.begin(), arcs.end(), alpha,
                               [](double a, const FareyArc& arc) { return a < arc.center(); });
    if (it != arcs.end() && it->contains(alpha)) return true;
    if (it != arcs.begin() && std::prev(it)->contains(alpha)) return true;
    return false;
  }
};

// Major arcs at every reduced fraction a/q with q <= W, each of half-width
// W/X. Disjointness needs the Farey gap 1/(q q') > 2W/X for neighbours,
// which is guaranteed by 2W^3 <= X; anything looser is rejected.
inline ArcSystem build_major_arcs(double x_scale, double cutoff) {
  if (!(x_scale >= 16.0)) throw std::invalid_argument("build_major_arcs: scale must be >= 16");
  if (!(cutoff >= 1.0)) throw std::invalid_argument("build_major_arcs: cutoff must be >= 1");
  if (2.0 * cutoff * cutoff * cutoff > x_scale)
    throw std::invalid_argument("build_major_arcs: arcs would overlap; need 2 W^3 <= X");
  ArcSystem sys;
  sys.scale = x_scale;
  sys.cutoff = cutoff;
  const double hw = cutoff / x_scale;
  sys.arcs.push_back({0, 1, hw});
  const std::int64_t wmax = static_cast<std::int64_t>(cutoff);
  for (std::int64_t q = 2; q <= wmax; ++q)
    for (std::int64_t a = 1; a < q; ++a)
      if (std::gcd(a, q) == 1) sys.arcs.push_back({a, q, hw});
  sys.arcs.push_back({1, 1, hw});
  std::sort(sys.arcs.begin(), sys.arcs.end(),
            [](const FareyArc& u, const FareyArc& v) { return u.center() < v.center(); });
  double measure = 0.0;
  for (std::size_t i = 0; i + 1 < sys.arcs.size(); ++i) {
    if (sys.arcs[i].upper() > sys.arcs[i + 1].lower() + 1e-15)
      throw std::logic_error("build_major_arcs: overlapping arcs");
  }
  for (const auto& arc : sys.arcs) measure += arc.upper() - arc.lower();
  sys.major_measure = measure;
  sys.minor_measure = 1.0 - measure;
  return sys;
}

// Arc-local approximant to the main sum: on the arc at a/q,
//   f*(alpha) = S(q, a) / q * v(alpha - a/q),
// with v the oscillatory integral over the main range.
inline Complex main_sum_approx(double alpha, const FareyArc& arc, const ThetaParams& tp) {
  if (!arc.contains(alpha))
    throw std::invalid_argument("main_sum_approx: alpha outside the given arc");
  const Complex s = gauss_sum(arc.den, arc.num) / static_cast<double>(arc.den);
  return s * oscillatory_integral(alpha - arc.center(), tp);
}

// Arc-local approximant to the microsquare sum: g*(alpha) = S(q, a) / q * Y.
inline Complex micro_sum_approx(double alpha, const FareyArc& arc, const ThetaParams& tp) {
  tp.ensure_valid();
  if (!arc.contains(alpha))
    throw std::invalid_argument("micro_sum_approx: alpha outside the given arc");
  return gauss_sum(arc.den, arc.num) / static_cast<double>(arc.den) *
         static_cast<double>(tp.micro_limit);
}

// ---------------------------------------------------------------------------
// Truncated singular integral
//   J(n; W) = Y * integral over |beta| <= W/X of v(beta)^2 e(-beta n) d beta.
// The plan fixes (params, W) and precomputes weighted v(beta)^2 values on
// composite Gauss-Legendre panels sized for the fastest phase that any
// n <= X can contribute; evaluating at a given n is then a weighted sum.
// ---------------------------------------------------------------------------
class SingularIntegralPlan {
 public:
  SingularIntegralPlan(const ThetaParams& tp, double cutoff, int oversample = 1)
      : params_(tp), cutoff_(cutoff) {
    tp.ensure_valid();
    if (!(cutoff >= 1.0) || cutoff > tp.scale)
      throw std::invalid_argument("SingularIntegralPlan: need 1 <= cutoff <= scale");
    if (oversample < 1 || oversample > 64)
      throw std::invalid_argument("SingularIntegralPlan: oversample out of range");
    const double bound = cutoff / tp.scale;
    // phase rate across the window is at most 2*pi*(2 P^2 + n) <= 2*pi*3X;
    // keep each panel under ~pi/4 of it
    std::int64_t panels = static_cast<std::int64_t>(std::ceil(48.0 * cutoff)) * oversample;
    panels = std::max<std::int64_t>(panels, 16);
    const auto& rule = detail::legendre_rule(16);
    const double h = 2.0 * bound / static_cast<double>(panels);
    const double y = static_cast<double>(tp.micro_limit);
    nodes_.reserve(static_cast<std::size_t>(panels) * rule.size());
    weighted_.reserve(nodes_.capacity());
    for (std::int64_t p = 0; p < panels; ++p) {
      const double mid = -bound + h * (static_cast<double>(p) + 0.5);
      for (const auto& [node, weight] : rule) {
        const double beta = mid + 0.5 * h * node;
        const Complex v = oscillatory_integral(beta, tp);
        nodes_.push_back(beta);
        weighted_.push_back(v * v * (weight * 0.5 * h * y));
      }
    }
  }

  // J(n; W). The exact value is real; the float evaluation's imaginary part
  // is checked against 1e-6 * Y before being discarded.
  double evaluate(std::int64_t n) const {
    if (n < 1 || static_cast<double>(n) > params_.scale)
      throw std::invalid_argument("SingularIntegralPlan: need 1 <= n <= scale");
    std::vector<Complex> terms(nodes_.size());
    for (std::size_t j = 0; j < nodes_.size(); ++j)
      terms[j] = weighted_[j] * unit_phase(-nodes_[j] * static_cast<double>(n));
    const Complex total = pairwise_sum(terms);
    if (std::abs(total.imag()) >= 1e-6 * static_cast<double>(params_.micro_limit))
      throw std::runtime_error("SingularIntegralPlan: imaginary part exceeds 1e-6 * Y");
    return total.real();
  }

  const ThetaParams& params() const { return params_; }
  double cutoff() const { return cutoff_; }
  std::int64_t node_count() const { return static_cast<std::int64_t>(nodes_.size()); }

 private:
  ThetaParams params_;
  double cutoff_ = 0.0;
  std::vector<double> nodes_;
  std::vector<Complex> weighted_;
};

inline double singular_integral(std::int64_t n, double cutoff, const ThetaParams& tp) {
  return SingularIntegralPlan(tp, cutoff).evaluate(n);
}

struct MajorArcComparison {
  double arc_integral = 0.0;        // quadrature of f^2 g e(-n alpha) over the arcs
  double series_truncation = 0.0;   // sharp singular-series truncation at W
  double integral_truncation = 0.0; // truncated singular integral J(n; W)
  double predicted = 0.0;           // product of the two truncations
  double difference = 0.0;          // arc_integral - predicted
};

// ---------------------------------------------------------------------------
// Numeric major-arc integral. The plan grids every arc with step <= 1/(8X)
// (about 8 points per oscillation of the fastest factor) and stores the
// trapezoid-weighted values of f(alpha)^2 g(alpha). Evaluating at n splits
// e(-n alpha) = e(-n a / q) * e(-n delta): the rational part reduces exactly
// through a root table, the offset part stays tiny (|n delta| <= W).
// ---------------------------------------------------------------------------
class MajorArcPlan {
 public:
  MajorArcPlan(const ThetaParams& tp, double cutoff, double steps_per_x = 8.0)
      : params_(tp), system_(build_major_arcs(tp.scale, cutoff)) {
    tp.ensure_valid();
    if (!(steps_per_x >= 1.0)) throw std::invalid_argument("MajorArcPlan: steps_per_x must be >= 1");
    for (const auto& arc : system_.arcs) {
      ArcGrid grid;
      grid.num = arc.num;
      grid.den = arc.den;
      // Offsets come from the exact center/half-width geometry, never from
      // pre-rounded endpoints: the 0/1 and 1/1 half-arcs must receive
      // mirror-image node sets (same count, negated offsets) or the
      // imaginary parts of their contributions cannot cancel.
      const double off_lo = arc.num == 0 ? 0.0 : -arc.half_width;
      const double off_hi = arc.num == arc.den ? 0.0 : arc.half_width;
      const std::int64_t m = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(std::ceil((off_hi - off_lo) * steps_per_x * tp.scale)));
      const double step = (off_hi - off_lo) / static_cast<double>(m);
      grid.offsets.reserve(m + 1);
      grid.weighted.reserve(m + 1);
      for (std::int64_t t = 0; t <= m; ++t) {
        const double offset = off_lo + step * static_cast<double>(t);
        const double alpha = arc.center() + offset;
        const double w = (t == 0 || t == m) ? 0.5 * step : step;
        const Complex f = main_sum(alpha, tp);
        const Complex g = micro_sum(alpha, tp);
        const Complex wf = f * f * g * w;
        grid.offsets.push_back(offset);
        grid.weighted.push_back(wf);
        mass_ += std::abs(wf);
      }
      grids_.push_back(std::move(grid));
    }
  }

  // Numeric integral of f^2 g e(-n alpha) over the major arcs (real part;
  // the imaginary part cancels across mirrored arcs and is checked).
  double integral(std::int64_t n) const {
    std::vector<Complex> per_arc(grids_.size());
    for (std::size_t i = 0; i < grids_.size(); ++i) {
      const ArcGrid& grid = grids_[i];
      const auto roots = detail::unit_root_table(grid.den);
      const std::int64_t neg_na =
          ((grid.den - ((n % grid.den) * (grid.num % grid.den)) % grid.den) % grid.den);
      const Complex rational = (*roots)[static_cast<std::size_t>(neg_na)];
      std::vector<Complex> terms(grid.offsets.size());
      for (std::size_t j = 0; j < terms.size(); ++j)
        terms[j] = grid.weighted[j] * unit_phase(-grid.offsets[j] * static_cast<double>(n));
      per_arc[i] = rational * pairwise_sum(terms);
    }
    const Complex total = pairwise_sum(per_arc);
    if (std::abs(total.imag()) > 1e-7 * (1.0 + mass_))
      throw std::runtime_error("MajorArcPlan: imaginary part failed to cancel");
    return total.real();
  }

  MajorArcComparison compare(std::int64_t n, const SingularIntegralPlan& jplan) const {
    MajorArcComparison out;
    out.arc_integral = integral(n);
    out.series_truncation = singular_series_additive(n, system_.cutoff);
    out.integral_truncation = jplan.evaluate(n);
    out.predicted = out.series_truncation * out.integral_truncation;
    out.difference = out.arc_integral - out.predicted;
    return out;
  }

  const ArcSystem& system() const { return system_; }
  const ThetaParams& params() const { return params_; }

 private:
  struct ArcGrid {
    std::int64_t num = 0;
    std::int64_t den = 1;
    std::vector<double> offsets;    // alpha - a/q at each grid node
    std::vector<Complex> weighted;  // trapezoid weight * f^2 g at the node
  };

  ThetaParams params_;
  ArcSystem system_;
  std::vector<ArcGrid> grids_;
  double mass_ = 0.0;
};

inline MajorArcComparison major_arc_value(std::int64_t n, const ThetaParams& tp, double cutoff) {
  if (n < 1 || static_cast<double>(n) > tp.scale || 2.0 * static_cast<double>(n) <= tp.scale)
    throw std::invalid_argument("major_arc_value: need scale/2 < n <= scale");
  MajorArcPlan plan(tp, cutoff);
  SingularIntegralPlan jplan(tp, cutoff);
  return plan.compare(n, jplan);
}

// ---------------------------------------------------------------------------
// Uniform grid over [0, 1) with exact rational phases: at alpha = j / M the
// phase of e(alpha k) is reduced as the integer j * (k mod M) mod M before
// touching floating point, so grid sums are exact trigonometric-polynomial
// integrals up to rounding. With M strictly larger than every frequency
// difference in the integrand, orthogonality turns grid averages into exact
// counting identities.
// ---------------------------------------------------------------------------
class ThetaGrid {
 public:
  ThetaGrid(const ThetaParams& tp, std::int64_t points) : params_(tp), points_(points) {
    tp.ensure_valid();
    if (points < 2) throw std::invalid_argument("ThetaGrid: need at least 2 points");
    if (points > (std::int64_t(1) << 26))
      throw std::invalid_argument("ThetaGrid: grid too large");
    roots_.reserve(static_cast<std::size_t>(points));
    for (std::int64_t k = 0; k < points; ++k)
      roots_.push_back(unit_phase(static_cast<double>(k) / static_cast<double>(points)));
    for (std::int64_t x = tp.main_first(); x <= tp.main_limit; ++x)
      main_sq_.push_back(static_cast<std::int64_t>((static_cast<unsigned __int128>(x) * x) % points));
    for (std::int64_t y = 1; y <= tp.micro_limit; ++y)
      micro_sq_.push_back((y * y) % points);
  }

  std::int64_t points() const { return points_; }
  const ThetaParams& params() const { return params_; }

  Complex main_value(std::int64_t j) const {
    Complex s = 0.0;
    for (std::int64_t k : main_sq_) s += roots_[static_cast<std::size_t>((j * k) % points_)];
    return s;
  }

  Complex micro_value(std::int64_t j) const {
    Complex s = 0.0;
    for (std::int64_t k : micro_sq_) s += roots_[static_cast<std::size_t>((j * k) % points_)];
    return s;
  }

  // Grid average of f^2 g e(-n alpha). With points > 2 (2 P^2 + Y^2) this is
  // exactly the number of (x1, x2, y) in the generating ranges with
  // x1^2 + x2^2 + y^2 = n, up to float rounding.
  double representation_integral(std::int64_t n) const {
    const std::int64_t neg_n = ((points_ - (n % points_)) % points_);
    const Complex total = blocked_sum<Complex>(
        points_,
        [&](std::int64_t j) {
          const Complex f = main_value(j);
          const Complex g = micro_value(j);
          return f * f * g * roots_[static_cast<std::size_t>((neg_n * j) % points_)];
        },
        /*parallel=*/true);
    return total.real() / static_cast<double>(points_);
  }

  // Grid average of |g|^4; exact count of y1^2 + y2^2 = y3^2 + y4^2 solutions
  // once points > 4 Y^2.
  double micro_fourth_moment() const {
    const double total = blocked_sum<double>(
        points_,
        [&](std::int64_t j) {
          const double a = std::abs(micro_value(j));
          return a * a * a * a;
        },
        /*parallel=*/true);
    return total / static_cast<double>(points_);
  }

  double main_fourth_moment() const {
    const double total = blocked_sum<double>(
        points_,
        [&](std::int64_t j) {
          const double a = std::abs(main_value(j));
          return a * a * a * a;
        },
        /*parallel=*/true);
    return total / static_cast<double>(points_);
  }

  // Grid average of |f|^4 |g|^2 over points outside the major arcs (or over
  // everything when arcs is null).
  double mixed_moment(const ArcSystem* arcs) const {
    const double total = blocked_sum<double>(
        points_,
        [&](std::int64_t j) {
          const double alpha = static_cast<double>(j) / static_cast<double>(points_);
          if (arcs != nullptr && arcs->in_major(alpha)) return 0.0;
          const double fa = std::abs(main_value(j));
          const double ga = std::abs(micro_value(j));
          return fa * fa * fa * fa * ga * ga;
        },
        /*parallel=*/true);
    return total / static_cast<double>(points_);
  }

 private:
  ThetaParams params_;
  std::int64_t points_;
  std::vector<Complex> roots_;
  std::vector<std::int64_t> main_sq_;   // x^2 mod points for the main range
  std::vector<std::int64_t> micro_sq_;  // y^2 mod points for the micro range
};

// Direct count of (x1, x2, y) with x1, x2 in the main range, y <= Y and
// x1^2 + x2^2 + y^2 = n: the combinatorial value the grid integral recovers.
inline std::int64_t main_range_triple_count(std::int64_t n, const ThetaParams& tp) {
  tp.ensure_valid();
  std::int64_t count = 0;
  for (std::int64_t y = 1; y <= tp.micro_limit && y * y < n; ++y) {
    const std::int64_t m = n - y * y;
    for (std::int64_t x1 = tp.main_first(); x1 <= tp.main_limit; ++x1) {
      const std::int64_t rest = m - x1 * x1;
      if (rest < 0) break;
      std::uint64_t root = 0;
      if (is_square(static_cast<std::uint64_t>(rest), &root) &&
          static_cast<std::int64_t>(root) > tp.main_limit / 2 &&
          static_cast<std::int64_t>(root) <= tp.main_limit)
        ++count;
    }
  }
  return count;
}

struct MinorArcMoment {
  double value = 0.0;       // grid average of |f|^4 |g|^2 off the major arcs
  double reference = 0.0;   // X Y log X + X Y^2 / W
  double ratio = 0.0;
  std::int64_t grid_points = 0;
  double minor_measure = 0.0;
};

// Survey-grade minor-arc mixed moment on a uniform grid of about 8 X points.
inline MinorArcMoment minor_arc_moment(const ThetaParams& tp, double cutoff) {
  tp.ensure_valid();
  const ArcSystem arcs = build_major_arcs(tp.scale, cutoff);
  const std::int64_t points = 8 * static_cast<std::int64_t>(std::ceil(tp.scale)) + 1;
  const ThetaGrid grid(tp, points);
  MinorArcMoment out;
  out.grid_points = points;
  out.minor_measure = arcs.minor_measure;
  out.value = grid.mixed_moment(&arcs);
  const double x = tp.scale, y = static_cast<double>(tp.micro_limit);
  out.reference = x * y * std::log(x) + x * y * y / cutoff;
  out.ratio = out.value / out.reference;
  return out;
}

}  // namespace microsq
