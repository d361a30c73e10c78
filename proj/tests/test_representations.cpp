// Representation counts with a designated microsquare slot, checked against
// table-based oracles built here from raw pair enumeration (no factorization).

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <optional>
#include <vector>

#include "microsq/representations.hpp"

using namespace microsq;

namespace {

struct PairTables {
  std::vector<std::int64_t> ordered_zero;    // ordered (a, b), a, b >= 0
  std::vector<std::int64_t> ordered_pos;     // ordered (a, b), a, b >= 1
  std::vector<std::int64_t> unordered_zero;  // a <= b, a >= 0
  std::vector<std::int64_t> unordered_pos;   // a <= b, a >= 1
};

PairTables build_pair_tables(std::int64_t limit) {
  PairTables t;
  t.ordered_zero.assign(limit + 1, 0);
  t.ordered_pos.assign(limit + 1, 0);
  t.unordered_zero.assign(limit + 1, 0);
  t.unordered_pos.assign(limit + 1, 0);
  for (std::int64_t a = 0; a * a <= limit; ++a) {
    for (std::int64_t b = a; a * a + b * b <= limit; ++b) {
      const std::int64_t m = a * a + b * b;
      const std::int64_t ordered = (a == b) ? 1 : 2;
      t.unordered_zero[m] += 1;
      t.ordered_zero[m] += ordered;
      if (a >= 1) {
        t.unordered_pos[m] += 1;
        t.ordered_pos[m] += ordered;
      }
    }
  }
  return t;
}

const PairTables& tables() {
  static const PairTables t = build_pair_tables(30000);
  return t;
}

std::int64_t oracle_count(std::int64_t n, std::int64_t ymax, bool ordered, bool allow_zero) {
  const PairTables& t = tables();
  std::int64_t count = 0;
  for (std::int64_t y = 1; y <= ymax && y * y <= n; ++y) {
    const std::int64_t m = n - y * y;
    if (ordered)
      count += allow_zero ? t.ordered_zero[m] : t.ordered_pos[m];
    else
      count += allow_zero ? t.unordered_zero[m] : t.unordered_pos[m];
  }
  return count;
}

}  // namespace

TEST_CASE("hand-checked representation counts", "[reps]") {
  CHECK(count_representations(3, 1) == 1);   // 1 + 1 + 1
  CHECK(count_representations(7, 2) == 0);
  CHECK(count_representations(6, 2) == 3);   // (1,2,1), (2,1,1), (1,1,2)
  CHECK(count_representations(9, 1) == 1);   // (2,2,1)
  CHECK(count_representations(9, 2) == 3);
  CHECK(count_representations(5, 0) == 0);
  CHECK(count_representations(5, 2, {.ordered = true, .allow_zero = true}) == 4);
  CHECK(count_representations(4, 2, {.ordered = true, .allow_zero = true}) == 1);  // 0+0+4
  CHECK(count_representations(6, 2, {.ordered = false, .allow_zero = false}) == 2);
  CHECK_THROWS_AS(count_representations(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(count_representations(5, -1), std::invalid_argument);
}

TEST_CASE("enumeration lists exactly the counted triples", "[reps]") {
  const std::vector<RepTriple> six = enumerate_representations(6, 2);
  REQUIRE(six == std::vector<RepTriple>{{1, 2, 1}, {1, 1, 2}});
  CHECK(enumerate_representations(7, 2).empty());
  const std::vector<RepTriple> five = enumerate_representations(5, 2, true);
  REQUIRE(five == std::vector<RepTriple>{{0, 2, 1}, {0, 1, 2}});

  for (std::int64_t n = 1; n <= 500; ++n) {
    for (std::int64_t ymax : {1, 3, 30}) {
      for (bool allow_zero : {false, true}) {
        const auto list = enumerate_representations(n, ymax, allow_zero);
        std::int64_t last_micro = 0;
        for (const auto& t : list) {
          REQUIRE(t.x1 * t.x1 + t.x2 * t.x2 + t.micro * t.micro == n);
          REQUIRE(t.x1 <= t.x2);
          REQUIRE(t.x1 >= (allow_zero ? 0 : 1));
          REQUIRE(t.micro >= 1);
          REQUIRE(t.micro <= ymax);
          REQUIRE(t.micro >= last_micro);  // sorted by micro
          last_micro = t.micro;
        }
        const auto opts = RepCountOptions{.ordered = false, .allow_zero = allow_zero};
        REQUIRE(static_cast<std::int64_t>(list.size()) ==
                count_representations(n, ymax, opts));
      }
    }
  }
}

TEST_CASE("counts match the pair-table oracle across all flags", "[reps]") {
  for (std::int64_t n = 1; n <= 30000; ++n) {
    std::int64_t root = isqrt(static_cast<std::uint64_t>(n));
    for (std::int64_t ymax : {std::int64_t(1), std::int64_t(3), std::int64_t(10), root}) {
      REQUIRE(count_representations(n, ymax) == oracle_count(n, ymax, true, false));
      REQUIRE(count_representations(n, ymax, {.ordered = true, .allow_zero = true}) ==
              oracle_count(n, ymax, true, true));
    }
    REQUIRE(count_representations(n, 10, {.ordered = false, .allow_zero = false}) ==
            oracle_count(n, 10, false, false));
    REQUIRE(count_representations(n, 10, {.ordered = false, .allow_zero = true}) ==
            oracle_count(n, 10, false, true));
  }
}

TEST_CASE("counts are monotone in the microsquare cap", "[reps]") {
  for (std::int64_t n = 1; n <= 2000; ++n) {
    std::int64_t prev = 0;
    for (std::int64_t ymax = 0; ymax * ymax <= n + 1; ++ymax) {
      const std::int64_t cur = count_representations(n, ymax);
      REQUIRE(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("minimal microsquare agrees between direct and sieve paths", "[reps]") {
  CHECK(min_microsquare(3) == std::optional<std::int64_t>(1));
  CHECK(min_microsquare(7) == std::nullopt);
  CHECK(min_microsquare(11) == std::optional<std::int64_t>(1));
  CHECK(min_microsquare(25) == std::nullopt);  // 24, 21, 16 all miss positive pairs
  CHECK(min_microsquare(1) == std::nullopt);

  const std::int64_t limit = 30000;
  const TwoSquareSieve sieve(limit, true);
  const PairTables& t = tables();
  for (std::int64_t n = 1; n <= limit; ++n) {
    std::optional<std::int64_t> expected;
    for (std::int64_t y = 1; n - y * y >= 2; ++y) {
      if (t.unordered_pos[n - y * y] > 0) {
        expected = y;
        break;
      }
    }
    REQUIRE(min_microsquare(n) == expected);
    REQUIRE(min_microsquare(n, sieve) == expected);
  }

  const TwoSquareSieve wrong_kind(100, false);
  CHECK_THROWS_AS(min_microsquare(50, wrong_kind), std::invalid_argument);
  const TwoSquareSieve small(10, true);
  CHECK_THROWS_AS(min_microsquare(50, small), std::invalid_argument);
}

TEST_CASE("membership predicate equals a positive count", "[reps]") {
  const TwoSquareSieve sieve(10000, true);
  for (std::int64_t n = 1; n <= 10000; ++n)
    for (std::int64_t ymax : {1, 3, 10})
      REQUIRE(has_representation(n, ymax, sieve) == (count_representations(n, ymax) > 0));
}

TEST_CASE("four-squares variant matches a free double loop", "[reps]") {
  CHECK(count_representations_four(4, 1) == 1);    // 1+1+1+1
  CHECK(count_representations_four(7, 2) == 4);    // 1+1+1+4 in four ordered slots
  CHECK(count_representations_four(3, 5) == 0);
  const PairTables& t = tables();
  for (std::int64_t n = 1; n <= 3000; ++n) {
    std::int64_t root = isqrt(static_cast<std::uint64_t>(n));
    for (std::int64_t ymax : {std::int64_t(1), std::int64_t(2), std::int64_t(5), root}) {
      std::int64_t expected = 0;
      for (std::int64_t y3 = 1; y3 <= ymax && y3 * y3 < n; ++y3)
        for (std::int64_t y4 = 1; y4 <= ymax && y3 * y3 + y4 * y4 < n; ++y4) {
          const std::int64_t rest = n - y3 * y3 - y4 * y4;
          if (rest >= 2) expected += t.ordered_pos[rest];
        }
      REQUIRE(count_representations_four(n, ymax) == expected);
    }
  }
  const TwoSquareSieve sieve(3000, true);
  for (std::int64_t n = 1; n <= 3000; ++n)
    for (std::int64_t ymax : {1, 2, 5})
      REQUIRE(has_representation_four(n, ymax, sieve) ==
              (count_representations_four(n, ymax) > 0));
}

TEST_CASE("three-square eligibility equals nonzero unrestricted counts", "[reps]") {
  // Census equivalence: n is a sum of three squares (zeros allowed) exactly
  // when the stripped residue avoids 7 mod 8.
  for (std::int64_t n = 1; n <= 10000; ++n) {
    bool any = false;
    for (std::int64_t z = 0; z * z <= n && !any; ++z) {
      const std::int64_t m = n - z * z;
      any = tables().ordered_zero[m] > 0;
    }
    REQUIRE(any == has_tag(classify(static_cast<std::uint64_t>(n)), Eligibility::GaussEligible));
  }
}
