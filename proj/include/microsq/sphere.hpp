#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "microsq/arith.hpp"
#include "microsq/two_squares.hpp"
#include "microsq/util.hpp"

namespace microsq {

// Integer solutions of x^2 + y^2 + z^2 = n. Projecting them to the unit
// sphere (divide by sqrt(n)) gives the normalized point set whose minimum
// spacing the scan ops measure.
struct SpherePointSet {
  std::int64_t n = 0;
  std::vector<std::array<std::int64_t, 3>> points;
  std::int64_t count() const { return static_cast<std::int64_t>(points.size()); }
};

namespace detail {

// Expand a canonical triple 0 <= a <= b <= c into all distinct coordinate
// permutations and sign patterns (signs only on nonzero coordinates), without
// generating duplicates.
inline void expand_orbit(std::int64_t a, std::int64_t b, std::int64_t c,
                         std::vector<std::array<std::int64_t, 3>>& out) {
  std::array<std::int64_t, 3> v{a, b, c};
  do {
    int nonzero[3];
    int k = 0;
    for (int i = 0; i < 3; ++i)
      if (v[i] != 0) nonzero[k++] = i;
    for (int mask = 0; mask < (1 << k); ++mask) {
      std::array<std::int64_t, 3> w = v;
      for (int i = 0; i < k; ++i)
        if (mask & (1 << i)) w[nonzero[i]] = -w[nonzero[i]];
      out.push_back(w);
    }
  } while (std::next_permutation(v.begin(), v.end()));
}

}  // namespace detail

// All lattice points on the sphere of radius sqrt(n): enumerate the largest
// coordinate c (so 3 c^2 >= n) and decompose the remainder into two squares
// with zeros allowed, then expand each canonical triple's orbit.
inline SpherePointSet lattice_points(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("lattice_points: n must be positive");
  SpherePointSet out;
  out.n = n;
  std::int64_t c = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(n / 3)));
  while (3 * c * c < n) ++c;
  const std::int64_t cmax = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(n)));
  for (; c <= cmax; ++c) {
    const std::uint64_t m = static_cast<std::uint64_t>(n - c * c);
    for (const auto& [a, b] : two_square_decompositions(m, /*allow_zero=*/true)) {
      if (b > c) continue;  // keep triples canonical: a <= b <= c
      detail::expand_orbit(a, b, c, out.points);
    }
  }
  return out;
}

namespace detail {

// Minimum squared distance between distinct lattice points, all pairs.
inline std::optional<std::int64_t> min_sep_sq_all_pairs(
    const std::vector<std::array<std::int64_t, 3>>& pts) {
  if (pts.size() < 2) return std::nullopt;
  std::int64_t best = INT64_MAX;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const std::int64_t dx = pts[i][0] - pts[j][0];
      const std::int64_t dy = pts[i][1] - pts[j][1];
      const std::int64_t dz = pts[i][2] - pts[j][2];
      const std::int64_t d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < best) best = d2;
    }
  }
  return best;
}

// Same value via a sorted sweep: order points by (z, y, x) and cut the inner
// loop as soon as the z-gap alone exceeds the best squared distance so far.
inline std::optional<std::int64_t> min_sep_sq_sweep(
    std::vector<std::array<std::int64_t, 3>> pts) {
  if (pts.size() < 2) return std::nullopt;
  std::sort(pts.begin(), pts.end(), [](const auto& u, const auto& v) {
    if (u[2] != v[2]) return u[2] < v[2];
    if (u[1] != v[1]) return u[1] < v[1];
    return u[0] < v[0];
  });
  std::int64_t best = INT64_MAX;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const std::int64_t dz = pts[j][2] - pts[i][2];
      if (dz * dz >= best) break;
      const std::int64_t dy = pts[j][1] - pts[i][1];
      const std::int64_t dx = pts[j][0] - pts[i][0];
      const std::int64_t d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < best) best = d2;
    }
  }
  return best;
}

}  // namespace detail

// Minimum squared distance between distinct (unnormalized) lattice points on
// the sphere, as an exact integer: |P - Q|^2 = 2n - 2<P, Q>, so normalized
// spacings are sqrt(D / n) with no cancellation. Dispatches to an all-pairs
// scan for small sets and the sorted sweep otherwise (both exact).
inline std::optional<std::int64_t> min_pair_separation_sq(const SpherePointSet& set) {
  if (set.points.size() <= 128) return detail::min_sep_sq_all_pairs(set.points);
  return detail::min_sep_sq_sweep(set.points);
}

enum class SpacingMetric { Euclidean, SquaredEuclidean };

// Minimum spacing of the normalized point set under the chosen metric:
// Euclidean gives sqrt(D/n), squared-Euclidean gives D/n, where D is the
// exact integer minimum of |P - Q|^2.
inline std::optional<double> min_spacing(const SpherePointSet& set, SpacingMetric metric) {
  const auto d2 = min_pair_separation_sq(set);
  if (!d2) return std::nullopt;
  const double ratio = static_cast<double>(*d2) / static_cast<double>(set.n);
  return metric == SpacingMetric::Euclidean ? std::sqrt(ratio) : ratio;
}

inline std::optional<double> min_spacing(std::int64_t n, SpacingMetric metric) {
  return min_spacing(lattice_points(n), metric);
}

struct SpacingRecord {
  std::int64_t n = 0;
  std::int64_t count = 0;
  std::optional<double> spacing;      // absent when fewer than 2 points
  std::optional<double> normalized;   // spacing * n / (log n)^1.01, absent for n = 1
};

inline std::vector<SpacingRecord> spacing_scan(std::int64_t lo, std::int64_t hi,
                                               SpacingMetric metric) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("spacing_scan: need 1 <= lo <= hi");
  std::vector<SpacingRecord> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t n = lo; n <= hi; ++n) {
    SpacingRecord rec;
    rec.n = n;
    const SpherePointSet set = lattice_points(n);
    rec.count = set.count();
    rec.spacing = min_spacing(set, metric);
    if (rec.spacing && n >= 2)
      rec.normalized = *rec.spacing * static_cast<double>(n) / std::pow(std::log(static_cast<double>(n)), 1.01);
    out.push_back(rec);
  }
  return out;
}

// Fraction of records (with a spacing) violating spacing <= C / n * (log n)^1.01,
// for each candidate constant C.
inline std::vector<double> spacing_violation_fractions(const std::vector<SpacingRecord>& records,
                                                       const std::vector<double>& constants) {
  std::vector<double> out;
  std::int64_t with_spacing = 0;
  for (const auto& r : records)
    if (r.normalized) ++with_spacing;
  for (double c : constants) {
    std::int64_t violations = 0;
    for (const auto& r : records)
      if (r.normalized && *r.normalized > c) ++violations;
    out.push_back(with_spacing == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(with_spacing));
  }
  return out;
}

}  // namespace microsq
