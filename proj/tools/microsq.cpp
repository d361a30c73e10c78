// microsq: command-line front end for the representation-counting toolkit.
//
// Exit codes: 0 success, 1 verification failures, 2 usage/config errors,
// 3 runtime failures (quadrature budget, internal consistency).

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "microsq/microsq.hpp"

namespace ms = microsq;
using KV = std::vector<std::pair<std::string, std::string>>;

namespace {

std::string fmt_double(double v) { return ms::detail::format_double17(v); }

void print_config(const KV& kv) {
  for (const auto& [k, v] : kv) std::printf("# %s = %s\n", k.c_str(), v.c_str());
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // binary: keep LF endings everywhere
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

int run_repr(std::int64_t n, std::int64_t ymax, bool enumerate, bool allow_zero) {
  const KV kv{{"command", "repr"},
              {"n", std::to_string(n)},
              {"ymax", std::to_string(ymax)},
              {"allow_zero", allow_zero ? "true" : "false"}};
  print_config(kv);
  const std::int64_t ordered =
      ms::count_representations(n, ymax, {.ordered = true, .allow_zero = allow_zero});
  const std::int64_t unordered =
      ms::count_representations(n, ymax, {.ordered = false, .allow_zero = allow_zero});
  std::printf("eligible = %s\n", ms::to_string(ms::classify(n)).c_str());
  std::printf("count_ordered = %" PRId64 "\n", ordered);
  std::printf("count_unordered = %" PRId64 "\n", unordered);
  const auto micro = ms::min_microsquare(n);
  std::printf("min_micro = %s\n", micro ? std::to_string(*micro).c_str() : "none");
  if (enumerate) {
    for (const auto& t : ms::enumerate_representations(n, ymax, allow_zero))
      std::printf("%" PRId64 "^2 + %" PRId64 "^2 + %" PRId64 "^2\n", t.x1, t.x2, t.micro);
  }
  return 0;
}

int run_scan(std::int64_t xmin, std::int64_t xmax, std::int64_t ymax, bool four,
             const std::string& out, std::optional<double> sseries_w) {
  ms::ScanOptions opts;
  opts.sseries_cutoff = sseries_w;
  const ms::ScanVariant variant = four ? ms::ScanVariant::FourSquares : ms::ScanVariant::ThreeSquares;
  const ms::ScanResult result = ms::scan_range(xmin, xmax, ymax, variant, opts);
  KV kv{{"command", "scan"},
        {"xmin", std::to_string(xmin)},
        {"xmax", std::to_string(xmax)},
        {"ymax", std::to_string(ymax)},
        {"variant", four ? "four" : "three"}};
  if (sseries_w) kv.emplace_back("sseries_w", fmt_double(*sseries_w));
  print_config(kv);
  std::printf("eligible = %" PRId64 "\n", result.summary.eligible_count);
  std::printf("exceptional = %" PRId64 "\n", result.summary.exceptional_count);
  std::printf("reference_bound = %s\n", fmt_double(result.summary.reference_bound).c_str());
  std::printf("ratio = %s\n", fmt_double(result.summary.ratio).c_str());
  if (!out.empty()) {
    auto os = open_output(out);
    ms::write_scan_csv(os, result, kv);
    std::printf("wrote %s\n", out.c_str());
  }
  return 0;
}

int run_sseries(std::int64_t n, double w, const std::string& mode) {
  const KV kv{{"command", "sseries"},
              {"n", std::to_string(n)},
              {"w", fmt_double(w)},
              {"mode", mode}};
  print_config(kv);
  if (mode != "add" && mode != "mult" && mode != "both")
    throw std::invalid_argument("sseries: mode must be add, mult, or both");
  if (mode == "add" || mode == "both")
    std::printf("sseries_add = %s\n", fmt_double(ms::singular_series_additive(n, w)).c_str());
  if (mode == "mult" || mode == "both") {
    const auto prod = ms::singular_series_multiplicative(n, w);
    std::printf("sseries_mult = %s\n", fmt_double(prod.value).c_str());
    std::printf("prime,max_exponent,partial_sum,method\n");
    for (const auto& row : prod.table.rows)
      std::printf("%" PRId64 ",%d,%s,%s\n", row.prime, row.max_exponent,
                  fmt_double(row.partial_sum).c_str(),
                  row.method == ms::LocalFactorMethod::TwoAdicDirect ? "direct" : "closed-form");
  }
  return 0;
}

int run_major(std::int64_t n, double w, std::int64_t ymax, std::optional<double> x_opt) {
  const double x = x_opt ? *x_opt : static_cast<double>(2 * n - 1);
  const KV kv{{"command", "major"},
              {"n", std::to_string(n)},
              {"w", fmt_double(w)},
              {"ymax", std::to_string(ymax)},
              {"x", fmt_double(x)}};
  print_config(kv);
  const ms::ThetaParams tp = ms::ThetaParams::from_scale(x, ymax);
  const ms::MajorArcComparison cmp = ms::major_arc_value(n, tp, w);
  std::printf("arc_integral = %s\n", fmt_double(cmp.arc_integral).c_str());
  std::printf("sseries_add = %s\n", fmt_double(cmp.series_truncation).c_str());
  std::printf("singular_integral = %s\n", fmt_double(cmp.integral_truncation).c_str());
  std::printf("predicted = %s\n", fmt_double(cmp.predicted).c_str());
  std::printf("difference = %s\n", fmt_double(cmp.difference).c_str());
  return 0;
}

int run_moment(double x, std::int64_t ymax, double w) {
  const KV kv{{"command", "moment"},
              {"x", fmt_double(x)},
              {"ymax", std::to_string(ymax)},
              {"w", fmt_double(w)}};
  print_config(kv);
  const ms::ThetaParams tp = ms::ThetaParams::from_scale(x, ymax);
  const ms::MinorArcMoment m = ms::minor_arc_moment(tp, w);
  std::printf("grid_points = %" PRId64 "\n", m.grid_points);
  std::printf("minor_measure = %s\n", fmt_double(m.minor_measure).c_str());
  std::printf("moment = %s\n", fmt_double(m.value).c_str());
  std::printf("reference = %s\n", fmt_double(m.reference).c_str());
  std::printf("ratio = %s\n", fmt_double(m.ratio).c_str());
  return 0;
}

int run_sphere(std::optional<std::int64_t> n, const std::string& range, const std::string& metric,
               const std::string& out) {
  const ms::SpacingMetric m = metric == "sq" ? ms::SpacingMetric::SquaredEuclidean
                                             : ms::SpacingMetric::Euclidean;
  if (metric != "sq" && metric != "euclid")
    throw std::invalid_argument("sphere: metric must be euclid or sq");
  if (n && !range.empty()) throw std::invalid_argument("sphere: give either n or --range");
  if (n) {
    const KV kv{{"command", "sphere"}, {"n", std::to_string(*n)}, {"metric", metric}};
    print_config(kv);
    const ms::SpherePointSet set = ms::lattice_points(*n);
    std::printf("count = %" PRId64 "\n", set.count());
    const auto spacing = ms::min_spacing(set, m);
    std::printf("min_spacing = %s\n", spacing ? fmt_double(*spacing).c_str() : "none");
    return 0;
  }
  if (range.empty()) throw std::invalid_argument("sphere: need n or --range A..B");
  const auto dots = range.find("..");
  if (dots == std::string::npos) throw std::invalid_argument("sphere: range must be A..B");
  const std::int64_t lo = std::stoll(range.substr(0, dots));
  const std::int64_t hi = std::stoll(range.substr(dots + 2));
  const KV kv{{"command", "sphere"}, {"range", range}, {"metric", metric}};
  const auto records = ms::spacing_scan(lo, hi, m);
  auto emit = [&](std::ostream& os) {
    for (const auto& [k, v] : kv) os << "# " << k << " = " << v << "\n";
    os << "n,count,spacing,normalized\n";
    for (const auto& r : records) {
      os << r.n << ',' << r.count << ',';
      if (r.spacing) os << fmt_double(*r.spacing);
      os << ',';
      if (r.normalized) os << fmt_double(*r.normalized);
      os << '\n';
    }
  };
  if (!out.empty()) {
    auto os = open_output(out);
    emit(os);
    std::printf("wrote %s\n", out.c_str());
  } else {
    emit(std::cout);
  }
  return 0;
}

int run_gaps(std::int64_t limit, const std::string& out) {
  const KV kv{{"command", "gaps"}, {"limit", std::to_string(limit)}};
  print_config(kv);
  const ms::TwoSquareGapScan scan = ms::two_square_gap_scan(limit);
  std::printf("members = %" PRId64 "\n", scan.member_count);
  std::printf("max_gap = %" PRId64 "\n", scan.max_gap);
  std::printf("max_gap_at = %" PRId64 "\n", scan.max_gap_at);
  std::printf("quarter_log_ratio = %s\n", fmt_double(scan.quarter_log_ratio).c_str());
  if (!out.empty()) {
    auto os = open_output(out);
    for (const auto& [k, v] : kv) os << "# " << k << " = " << v << "\n";
    os << "gap,occurrences\n";
    for (const auto& e : scan.histogram) os << e.gap << ',' << e.occurrences << '\n';
    std::printf("wrote %s\n", out.c_str());
  }
  return 0;
}

int run_gapstats(double x, double w, std::int64_t stride) {
  const KV kv{{"command", "gapstats"},
              {"x", fmt_double(x)},
              {"w", fmt_double(w)},
              {"stride", std::to_string(stride)}};
  print_config(kv);
  const ms::TruncationGapSample s = ms::truncation_gap_stats(x, w, stride);
  std::printf("samples = %" PRId64 "\n", s.sample_count);
  std::printf("mean_square = %s\n", fmt_double(s.mean_square).c_str());
  std::printf("max_abs = %s\n", fmt_double(s.max_abs).c_str());
  std::printf("reference = %s\n", fmt_double(s.reference).c_str());
  std::printf("ratio = %s\n", fmt_double(s.ratio).c_str());
  return 0;
}

int run_verify(const std::string& suite, const std::string& json_out) {
  const KV kv{{"command", "verify"}, {"suite", suite}};
  print_config(kv);
  const ms::VerifyReport report = ms::run_verify(suite);
  for (const auto& c : report.checks)
    std::printf("[%s] %s (%s)\n", c.pass ? "OK" : "FAIL", c.name.c_str(), c.detail.c_str());
  std::printf("%s: %zu checks, %s\n", suite.c_str(), report.checks.size(),
              report.all_pass() ? "all passed" : "FAILURES");
  if (!json_out.empty()) {
    nlohmann::json j;
    j["suite"] = report.suite;
    j["all_pass"] = report.all_pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
      const char* kind = c.kind == ms::FailureKind::Exact       ? "exact"
                         : c.kind == ms::FailureKind::Tolerance ? "tolerance"
                         : c.kind == ms::FailureKind::Runtime   ? "runtime"
                                                                : "none";
      j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"kind", kind}, {"detail", c.detail}});
    }
    auto os = open_output(json_out);
    os << j.dump(2) << "\n";
  }
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"counting sums of two squares plus constrained microsquares"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a TOML/INI file");
  int threads = 0;
  app.add_option("--threads", threads, "worker thread cap (exported as MICROSQ_THREADS)");

  // Callbacks only record what to do; the action runs after parsing so that
  // global options (--threads) are applied first.
  std::function<int()> action;

  // repr
  std::int64_t repr_n = 0, repr_ymax = 0;
  bool repr_enum = false, repr_zero = false;
  auto* repr = app.add_subcommand("repr", "count representations n = x1^2 + x2^2 + y^2, y <= ymax");
  repr->add_option("n", repr_n, "target integer")->required();
  repr->add_option("--ymax", repr_ymax, "microsquare cap")->required();
  repr->add_flag("--enumerate", repr_enum, "list the representations");
  repr->add_flag("--allow-zero", repr_zero, "permit zero values for x1, x2");
  repr->callback([&] { action = [&] { return run_repr(repr_n, repr_ymax, repr_enum, repr_zero); }; });

  // scan
  std::int64_t scan_xmin = 0, scan_xmax = 0, scan_ymax = 0;
  bool scan_four = false;
  std::string scan_out;
  double scan_sseries_w = 0.0;
  auto* scan = app.add_subcommand("scan", "census of eligible n without a capped representation");
  scan->add_option("--xmin", scan_xmin, "window start")->required();
  scan->add_option("--xmax", scan_xmax, "window end (inclusive)")->required();
  scan->add_option("--ymax", scan_ymax, "microsquare cap")->required();
  scan->add_flag("--four", scan_four, "four-squares variant (two microsquare slots)");
  scan->add_option("--out", scan_out, "CSV output path");
  auto* scan_w_opt = scan->add_option("--sseries-w", scan_sseries_w,
                                      "also record singular-series truncations at this cutoff");
  scan->callback([&] {
    action = [&] {
      std::optional<double> w;
      if (scan_w_opt->count() > 0) w = scan_sseries_w;
      return run_scan(scan_xmin, scan_xmax, scan_ymax, scan_four, scan_out, w);
    };
  });

  // sseries
  std::int64_t ss_n = 0;
  double ss_w = 0.0;
  std::string ss_mode = "both";
  auto* ss = app.add_subcommand("sseries", "truncated singular series at cutoff W");
  ss->add_option("n", ss_n, "target integer")->required();
  ss->add_option("--w", ss_w, "truncation cutoff")->required();
  ss->add_option("--mode", ss_mode, "add, mult, or both (default both)");
  ss->callback([&] { action = [&] { return run_sseries(ss_n, ss_w, ss_mode); }; });

  // major
  std::int64_t mj_n = 0, mj_ymax = 0;
  double mj_w = 0.0, mj_x = 0.0;
  auto* mj = app.add_subcommand("major", "major-arc integral vs truncated main term");
  mj->add_option("n", mj_n, "target integer")->required();
  mj->add_option("--w", mj_w, "arc cutoff")->required();
  mj->add_option("--ymax", mj_ymax, "microsquare cap")->required();
  auto* mj_x_opt = mj->add_option("--x", mj_x, "scale X with X/2 < n <= X (default 2n-1)");
  mj->callback([&] {
    action = [&] {
      std::optional<double> x;
      if (mj_x_opt->count() > 0) x = mj_x;
      return run_major(mj_n, mj_w, mj_ymax, x);
    };
  });

  // moment
  double mo_x = 0.0, mo_w = 0.0;
  std::int64_t mo_ymax = 0;
  auto* mo = app.add_subcommand("moment", "minor-arc mixed moment on a uniform grid");
  mo->add_option("--x", mo_x, "scale X")->required();
  mo->add_option("--ymax", mo_ymax, "microsquare cap")->required();
  mo->add_option("--w", mo_w, "arc cutoff")->required();
  mo->callback([&] { action = [&] { return run_moment(mo_x, mo_ymax, mo_w); }; });

  // sphere
  std::int64_t sp_n = 0;
  std::string sp_range, sp_metric = "euclid", sp_out;
  auto* sp = app.add_subcommand("sphere", "lattice points on a sphere and their minimum spacing");
  auto* sp_n_opt = sp->add_option("n", sp_n, "single radius-squared value");
  sp->add_option("--range", sp_range, "scan range A..B");
  sp->add_option("--metric", sp_metric, "euclid or sq (default euclid)");
  sp->add_option("--out", sp_out, "CSV output path for range scans");
  sp->callback([&] {
    action = [&] {
      std::optional<std::int64_t> n;
      if (sp_n_opt->count() > 0) n = sp_n;
      return run_sphere(n, sp_range, sp_metric, sp_out);
    };
  });

  // gaps
  std::int64_t gp_limit = 0;
  std::string gp_out;
  auto* gp = app.add_subcommand("gaps", "gaps between sums of two squares up to a limit");
  gp->add_option("--limit", gp_limit, "scan limit")->required();
  gp->add_option("--out", gp_out, "CSV output path for the gap histogram");
  gp->callback([&] { action = [&] { return run_gaps(gp_limit, gp_out); }; });

  // gapstats
  double gs_x = 0.0, gs_w = 0.0;
  std::int64_t gs_stride = 1;
  auto* gs = app.add_subcommand("gapstats", "size of the product-vs-sharp truncation gap");
  gs->add_option("--x", gs_x, "scale X (samples eligible n in (X/2, X])")->required();
  gs->add_option("--w", gs_w, "truncation cutoff")->required();
  gs->add_option("--stride", gs_stride, "sample stride (default 1)");
  gs->callback([&] { action = [&] { return run_gapstats(gs_x, gs_w, gs_stride); }; });

  // verify
  std::string vf_suite = "all", vf_json;
  auto* vf = app.add_subcommand("verify", "run a self-check suite");
  vf->add_option("--suite", vf_suite, "lemmas, orthogonality, truncation, or all (default all)");
  vf->add_option("--json", vf_json, "write the report as JSON");
  vf->callback([&] { action = [&] { return run_verify(vf_suite, vf_json); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (threads > 0) {
    const std::string v = std::to_string(threads);
    setenv("MICROSQ_THREADS", v.c_str(), 1);
  }
  try {
    return action ? action() : 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
