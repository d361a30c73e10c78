#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "microsq/arith.hpp"
#include "microsq/circle_method.hpp"
#include "microsq/local_densities.hpp"
#include "microsq/representations.hpp"
#include "microsq/two_squares.hpp"
#include "microsq/util.hpp"

namespace microsq {

// ---------------------------------------------------------------------------
// Exceptional-set scans: census of eligible n in a window that have no
// representation with the microsquare variable capped at y_limit.
// ---------------------------------------------------------------------------

enum class ScanVariant { ThreeSquares, FourSquares };

struct SurveyRecord {
  std::int64_t n = 0;
  Eligibility tags = Eligibility::None;
  std::int64_t rep_count = 0;
  std::optional<std::int64_t> min_micro;
  std::optional<double> sseries_add;
  std::optional<double> sseries_mult;
  friend bool operator==(const SurveyRecord&, const SurveyRecord&) = default;
};

struct ScanSummary {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t y_limit = 0;
  ScanVariant variant = ScanVariant::ThreeSquares;
  std::int64_t eligible_count = 0;
  std::int64_t exceptional_count = 0;
  double reference_bound = 0.0;  // X Y^-1 log X (loglog X)^2, or Y^-2 ... ^3 for the four-variant
  double ratio = 0.0;            // exceptional_count / reference_bound
};

struct ScanResult {
  ScanSummary summary;
  std::vector<SurveyRecord> exceptions;  // ascending n
};

struct ScanOptions {
  std::optional<double> sseries_cutoff;  // fill the singular-series columns at this W
  bool parallel = true;
};

namespace detail {

// Smallest t >= 1 with a representation n = x1^2 + x2^2 + y3^2 + y4^2,
// positive parts, max(y3, y4) = t (so both micro slots fit in [1, t]).
inline std::optional<std::int64_t> min_micro_pair_max(std::int64_t n, const TwoSquareSieve& sieve) {
  for (std::int64_t t = 1; t * t < n; ++t) {
    for (std::int64_t y4 = 1; y4 <= t; ++y4) {
      const std::int64_t rest = n - t * t - y4 * y4;
      if (rest < 2) break;
      if (sieve.contains(static_cast<std::uint64_t>(rest))) return t;
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline ScanResult scan_range(std::int64_t lo, std::int64_t hi, std::int64_t y_limit,
                             ScanVariant variant, const ScanOptions& opts = {}) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("scan_range: need 1 <= lo <= hi");
  if (y_limit < 1) throw std::invalid_argument("scan_range: y_limit must be >= 1");
  const TwoSquareSieve sieve(static_cast<std::uint64_t>(hi), /*positive_only=*/true);
  constexpr std::int64_t kBlock = 8192;
  const std::int64_t blocks = (hi - lo + kBlock) / kBlock;
  std::vector<std::vector<SurveyRecord>> exc(static_cast<std::size_t>(blocks));
  std::vector<std::int64_t> eligible(static_cast<std::size_t>(blocks), 0);
  for_blocks(
      lo, hi + 1, kBlock,
      [&](std::int64_t b, std::int64_t block_lo, std::int64_t block_hi) {
        auto& out = exc[static_cast<std::size_t>(b)];
        for (std::int64_t n = block_lo; n < block_hi; ++n) {
          const Eligibility tags = classify(static_cast<std::uint64_t>(n));
          const bool ok = variant == ScanVariant::ThreeSquares
                              ? has_tag(tags, Eligibility::ThreeSquareEligible)
                              : has_tag(tags, Eligibility::FourSquareEligible);
          if (!ok) continue;
          ++eligible[static_cast<std::size_t>(b)];
          const bool represented = variant == ScanVariant::ThreeSquares
                                       ? has_representation(n, y_limit, sieve)
                                       : has_representation_four(n, y_limit, sieve);
          if (represented) continue;
          SurveyRecord rec;
          rec.n = n;
          rec.tags = tags;
          rec.rep_count = 0;
          rec.min_micro = variant == ScanVariant::ThreeSquares
                              ? min_microsquare(n, sieve)
                              : detail::min_micro_pair_max(n, sieve);
          if (opts.sseries_cutoff) {
            rec.sseries_add = singular_series_additive(n, *opts.sseries_cutoff);
            rec.sseries_mult = singular_series_multiplicative(n, *opts.sseries_cutoff).value;
          }
          out.push_back(rec);
        }
      },
      opts.parallel);
  ScanResult result;
  result.summary.lo = lo;
  result.summary.hi = hi;
  result.summary.y_limit = y_limit;
  result.summary.variant = variant;
  for (std::int64_t b = 0; b < blocks; ++b) {
    result.summary.eligible_count += eligible[static_cast<std::size_t>(b)];
    for (auto& r : exc[static_cast<std::size_t>(b)]) result.exceptions.push_back(std::move(r));
  }
  result.summary.exceptional_count = static_cast<std::int64_t>(result.exceptions.size());
  const double x = static_cast<double>(hi);
  const double y = static_cast<double>(y_limit);
  const double ll = std::log(std::log(x));
  result.summary.reference_bound =
      variant == ScanVariant::ThreeSquares
          ? x / y * std::log(x) * ll * ll
          : x / (y * y) * std::log(x) * ll * ll * ll;
  result.summary.ratio = result.summary.reference_bound == 0.0
                             ? 0.0
                             : static_cast<double>(result.summary.exceptional_count) /
                                   result.summary.reference_bound;
  return result;
}

// Census over the dyadic window (X/2, X].
inline ScanResult exceptional_scan(double x_scale, std::int64_t y_limit, ScanVariant variant,
                                   const ScanOptions& opts = {}) {
  if (!(x_scale >= 4.0)) throw std::invalid_argument("exceptional_scan: scale too small");
  const std::int64_t lo = static_cast<std::int64_t>(x_scale / 2.0) + 1;
  const std::int64_t hi = static_cast<std::int64_t>(x_scale);
  return scan_range(lo, hi, y_limit, variant, opts);
}

// ---------------------------------------------------------------------------
// Gaps between sums of two squares (zeros allowed) up to a limit.
// ---------------------------------------------------------------------------

struct GapHistogramEntry {
  std::int64_t gap = 0;
  std::int64_t occurrences = 0;
  friend bool operator==(const GapHistogramEntry&, const GapHistogramEntry&) = default;
};

struct TwoSquareGapScan {
  std::int64_t limit = 0;
  std::int64_t member_count = 0;
  std::int64_t max_gap = 0;
  std::int64_t max_gap_at = 0;  // left endpoint of the first maximal gap
  double quarter_log_ratio = 0.0;  // max_gap / (0.25 * log limit)
  std::vector<GapHistogramEntry> histogram;  // ascending by gap
};

inline TwoSquareGapScan two_square_gap_scan(std::int64_t limit) {
  if (limit < 2) throw std::invalid_argument("two_square_gap_scan: limit must be >= 2");
  const TwoSquareSieve sieve(static_cast<std::uint64_t>(limit), /*positive_only=*/false);
  TwoSquareGapScan out;
  out.limit = limit;
  std::map<std::int64_t, std::int64_t> hist;
  std::int64_t prev = -1;
  for (std::int64_t m = 1; m <= limit; ++m) {
    if (!sieve.contains(static_cast<std::uint64_t>(m))) continue;
    ++out.member_count;
    if (prev >= 0) {
      const std::int64_t gap = m - prev;
      ++hist[gap];
      if (gap > out.max_gap) {
        out.max_gap = gap;
        out.max_gap_at = prev;
      }
    }
    prev = m;
  }
  for (const auto& [gap, occurrences] : hist) out.histogram.push_back({gap, occurrences});
  out.quarter_log_ratio =
      static_cast<double>(out.max_gap) / (0.25 * std::log(static_cast<double>(limit)));
  return out;
}

// ---------------------------------------------------------------------------
// CSV emission and parsing (RFC 4180 fields, UTF-8, LF line endings, plus
// #-prefixed comment lines carrying the resolved run configuration).
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace detail

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline const char* kScanCsvHeader = "n,eligible,rep_count,min_micro,sseries_add,sseries_mult";

inline void write_scan_csv(std::ostream& os, const ScanResult& result,
                           const std::vector<std::pair<std::string, std::string>>& config) {
  for (const auto& [key, value] : config) os << "# " << key << " = " << value << "\n";
  os << kScanCsvHeader << "\n";
  for (const auto& rec : result.exceptions) {
    os << rec.n << ',' << csv_escape(to_string(rec.tags)) << ',' << rec.rep_count << ',';
    if (rec.min_micro) os << *rec.min_micro;
    os << ',';
    if (rec.sseries_add) os << detail::format_double17(*rec.sseries_add);
    os << ',';
    if (rec.sseries_mult) os << detail::format_double17(*rec.sseries_mult);
    os << '\n';
  }
}

inline std::vector<SurveyRecord> read_scan_csv(std::istream& is) {
  std::vector<SurveyRecord> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kScanCsvHeader)
        throw std::invalid_argument("read_scan_csv: unexpected header: " + line);
      header_seen = true;
      continue;
    }
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 6)
      throw std::invalid_argument("read_scan_csv: expected 6 fields, got line: " + line);
    SurveyRecord rec;
    rec.n = std::stoll(fields[0]);
    rec.tags = eligibility_from_string(fields[1]);
    rec.rep_count = std::stoll(fields[2]);
    if (!fields[3].empty()) rec.min_micro = std::stoll(fields[3]);
    if (!fields[4].empty()) rec.sseries_add = std::stod(fields[4]);
    if (!fields[5].empty()) rec.sseries_mult = std::stod(fields[5]);
    out.push_back(rec);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Self-check suites, also exposed through the CLI. Each check reports pass or
// fail with a one-line detail; exceptions inside a check are captured as
// runtime failures rather than aborting the suite.
// ---------------------------------------------------------------------------

enum class FailureKind { None, Exact, Tolerance, Runtime };

struct CheckResult {
  std::string name;
  bool pass = false;
  FailureKind kind = FailureKind::None;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  int exit_code() const {
    bool any_fail = false;
    for (const auto& c : checks) {
      if (!c.pass && c.kind == FailureKind::Runtime) return 3;
      if (!c.pass) any_fail = true;
    }
    return any_fail ? 1 : 0;
  }
};

namespace detail {

template <typename Fn>
inline void run_check(VerifyReport& report, const std::string& name, FailureKind fail_kind, Fn&& fn) {
  CheckResult res;
  res.name = name;
  try {
    auto [pass, detail_text] = fn();
    res.pass = pass;
    res.detail = detail_text;
    res.kind = pass ? FailureKind::None : fail_kind;
  } catch (const std::exception& e) {
    res.pass = false;
    res.kind = FailureKind::Runtime;
    res.detail = std::string("exception: ") + e.what();
  }
  report.checks.push_back(std::move(res));
}

inline void verify_lemma_checks(VerifyReport& report) {
  run_check(report, "gauss-sum closed form vs direct (q <= 300)", FailureKind::Tolerance, [] {
    double worst = 0.0;
    for (std::int64_t q = 1; q <= 300; ++q) {
      for (std::int64_t a = 1; a <= q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        const double err = std::abs(gauss_sum(q, a) - gauss_sum_direct(q, a));
        worst = std::max(worst, err / std::sqrt(static_cast<double>(q)));
      }
    }
    return std::make_pair(worst < 1e-9, "max scaled error " + format_double17(worst));
  });
  run_check(report, "local density closed form vs direct (q <= 120, n <= 40)",
            FailureKind::Tolerance, [] {
              double worst = 0.0;
              for (std::int64_t q = 1; q <= 120; ++q)
                for (std::int64_t n = 1; n <= 40; ++n)
                  worst = std::max(worst, std::abs(local_density(q, n) - local_density_direct(q, n)));
              return std::make_pair(worst < 1e-9, "max error " + format_double17(worst));
            });
  run_check(report, "odd local factor floor 1 - 1/p (p <= 31, H <= 6, n <= 2000)",
            FailureKind::Exact, [] {
              for (std::int64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31})
                for (std::int64_t n = 1; n <= 2000; ++n)
                  for (int H = 0; H <= 6; ++H) {
                    const Rational t = odd_prime_partial_sum(p, H, n);
                    if (t < Rational(p - 1, p))
                      return std::make_pair(false, "floor violated at p=" + std::to_string(p) +
                                                       " n=" + std::to_string(n));
                  }
              return std::make_pair(true, std::string("exact inequality holds"));
            });
  run_check(report, "2-adic partial sum floor 2^-6 (eligible n <= 2000, H <= 10)",
            FailureKind::Exact, [] {
              for (std::int64_t n = 1; n <= 2000; ++n) {
                if (n % 4 == 0 || n % 8 == 7) continue;
                for (int H = 3; H <= 10; ++H) {
                  const double t = two_adic_partial_sum(H, n);
                  if (t < 0.015625 - 1e-9)
                    return std::make_pair(false, "floor violated at n=" + std::to_string(n) +
                                                     " H=" + std::to_string(H));
                }
              }
              return std::make_pair(true, std::string("floor holds with 1e-9 slack"));
            });
}

inline void verify_orthogonality_checks(VerifyReport& report) {
  run_check(report, "grid integral vs direct triple count (X = 1e4, Y = 20)",
            FailureKind::Tolerance, [] {
              const ThetaParams tp = ThetaParams::from_scale(1e4, 20);
              const std::int64_t big =
                  2 * (2 * tp.main_limit * tp.main_limit + tp.micro_limit * tp.micro_limit) + 1;
              const ThetaGrid grid(tp, big);
              std::mt19937_64 rng(411u);
              double worst = 0.0;
              for (int i = 0; i < 10; ++i) {
                const std::int64_t n = 5001 + static_cast<std::int64_t>(rng() % 5000);
                const double integral = grid.representation_integral(n);
                const double count = static_cast<double>(main_range_triple_count(n, tp));
                worst = std::max(worst, std::abs(integral - count));
              }
              return std::make_pair(worst < 1e-6, "max error " + format_double17(worst));
            });
}

inline void verify_truncation_checks(VerifyReport& report) {
  run_check(report, "product/sharp truncation identity residual (W = 10)",
            FailureKind::Tolerance, [] {
              std::mt19937_64 rng(412u);
              double worst = 0.0;
              for (int i = 0; i < 100; ++i) {
                const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 1000000);
                worst = std::max(worst, truncation_identity_check(n, 10.0).residual);
              }
              return std::make_pair(worst < 1e-8, "max residual " + format_double17(worst));
            });
}

}  // namespace detail

inline VerifyReport run_verify(const std::string& suite) {
  VerifyReport report;
  report.suite = suite;
  if (suite == "lemmas") {
    detail::verify_lemma_checks(report);
  } else if (suite == "orthogonality") {
    detail::verify_orthogonality_checks(report);
  } else if (suite == "truncation") {
    detail::verify_truncation_checks(report);
  } else if (suite == "all") {
    detail::verify_lemma_checks(report);
    detail::verify_orthogonality_checks(report);
    detail::verify_truncation_checks(report);
  } else {
    throw std::invalid_argument("run_verify: unknown suite '" + suite +
                                "' (expected lemmas, orthogonality, truncation, all)");
  }
  return report;
}

}  // namespace microsq
