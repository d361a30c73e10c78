#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "microsq/two_squares.hpp"
#include "microsq/util.hpp"

namespace microsq {

// One representation n = x1^2 + x2^2 + micro^2 with x1 <= x2 and the
// designated microsquare variable last.
struct RepTriple {
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;
  std::int64_t micro = 0;
  friend bool operator==(const RepTriple&, const RepTriple&) = default;
};

struct RepCountOptions {
  bool ordered = true;      // count (x1, x2) as an ordered pair
  bool allow_zero = false;  // permit x1 or x2 to be zero (micro stays >= 1)
};

// Number of representations n = x1^2 + x2^2 + y^2 with 1 <= y <= micro_limit
// and, by default, ordered positive (x1, x2). The microsquare slot is a
// designated variable: its range never depends on allow_zero.
inline std::int64_t count_representations(std::int64_t n, std::int64_t micro_limit,
                                          RepCountOptions opts = {}) {
  if (n < 1) throw std::invalid_argument("count_representations: n must be positive");
  if (micro_limit < 0) throw std::invalid_argument("count_representations: micro_limit must be >= 0");
  std::int64_t count = 0;
  for (std::int64_t y = 1; y <= micro_limit && y * y <= n; ++y) {
    const std::uint64_t m = static_cast<std::uint64_t>(n - y * y);
    if (opts.ordered) {
      count += ordered_two_square_count(m, opts.allow_zero);
    } else {
      count += static_cast<std::int64_t>(two_square_decompositions(m, opts.allow_zero).size());
    }
  }
  return count;
}

// All representations as triples (x1 <= x2, micro), sorted by micro then x1.
inline std::vector<RepTriple> enumerate_representations(std::int64_t n, std::int64_t micro_limit,
                                                        bool allow_zero = false) {
  if (n < 1) throw std::invalid_argument("enumerate_representations: n must be positive");
  if (micro_limit < 0)
    throw std::invalid_argument("enumerate_representations: micro_limit must be >= 0");
  std::vector<RepTriple> out;
  for (std::int64_t y = 1; y <= micro_limit && y * y <= n; ++y) {
    const std::uint64_t m = static_cast<std::uint64_t>(n - y * y);
    for (const auto& [a, b] : two_square_decompositions(m, allow_zero))
      out.push_back({a, b, y});
  }
  return out;
}

// Smallest y >= 1 for which n - y^2 is a sum of two positive squares, if any.
inline std::optional<std::int64_t> min_microsquare(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("min_microsquare: n must be positive");
  for (std::int64_t y = 1; n - y * y >= 2; ++y) {
    if (has_positive_two_square(static_cast<std::uint64_t>(n - y * y))) return y;
  }
  return std::nullopt;
}

// Sieve-backed variant for scan workloads; the sieve must be positive-pair
// and cover n.
inline std::optional<std::int64_t> min_microsquare(std::int64_t n, const TwoSquareSieve& sieve) {
  if (n < 1) throw std::invalid_argument("min_microsquare: n must be positive");
  if (!sieve.positive_only() || sieve.limit() < static_cast<std::uint64_t>(n))
    throw std::invalid_argument("min_microsquare: sieve must be positive-pair and cover n");
  for (std::int64_t y = 1; n - y * y >= 2; ++y) {
    if (sieve.contains(static_cast<std::uint64_t>(n - y * y))) return y;
  }
  return std::nullopt;
}

inline bool has_representation(std::int64_t n, std::int64_t micro_limit,
                               const TwoSquareSieve& sieve) {
  if (!sieve.positive_only() || sieve.limit() < static_cast<std::uint64_t>(n))
    throw std::invalid_argument("has_representation: sieve must be positive-pair and cover n");
  for (std::int64_t y = 1; y <= micro_limit && n - y * y >= 2; ++y) {
    if (sieve.contains(static_cast<std::uint64_t>(n - y * y))) return true;
  }
  return false;
}

// Four-squares variant with two designated microsquare slots: number of
// n = x1^2 + x2^2 + y3^2 + y4^2 with ordered positive (x1, x2) and ordered
// (y3, y4) in [1, micro_limit]^2.
inline std::int64_t count_representations_four(std::int64_t n, std::int64_t micro_limit) {
  if (n < 1) throw std::invalid_argument("count_representations_four: n must be positive");
  if (micro_limit < 0)
    throw std::invalid_argument("count_representations_four: micro_limit must be >= 0");
  std::int64_t count = 0;
  for (std::int64_t y3 = 1; y3 <= micro_limit && y3 * y3 < n; ++y3) {
    for (std::int64_t y4 = 1; y4 <= y3; ++y4) {
      const std::int64_t rest = n - y3 * y3 - y4 * y4;
      if (rest < 2) break;
      const std::int64_t pairs = ordered_two_square_count(static_cast<std::uint64_t>(rest), false);
      count += (y3 == y4) ? pairs : 2 * pairs;
    }
  }
  return count;
}

inline bool has_representation_four(std::int64_t n, std::int64_t micro_limit,
                                    const TwoSquareSieve& sieve) {
  if (!sieve.positive_only() || sieve.limit() < static_cast<std::uint64_t>(n))
    throw std::invalid_argument("has_representation_four: sieve must be positive-pair and cover n");
  for (std::int64_t y3 = 1; y3 <= micro_limit && y3 * y3 < n; ++y3) {
    for (std::int64_t y4 = 1; y4 <= y3; ++y4) {
      const std::int64_t rest = n - y3 * y3 - y4 * y4;
      if (rest < 2) break;
      if (sieve.contains(static_cast<std::uint64_t>(rest))) return true;
    }
  }
  return false;
}

}  // namespace microsq
