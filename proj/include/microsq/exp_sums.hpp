#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "microsq/arith.hpp"
#include "microsq/util.hpp"

namespace microsq {

// ---------------------------------------------------------------------------
// Generating-sum geometry. A scale X fixes the main range: the main variables
// run over (P/2, P] with P = floor(sqrt(X)), while the microsquare variable
// runs over [1, Y]. Survey-grade evaluations take a real frequency alpha;
// exactness-grade grid work lives in circle_method.hpp and reduces phases
// exactly as integers.
// ---------------------------------------------------------------------------
struct ThetaParams {
  std::int64_t main_limit = 0;   // P; main variables x satisfy P/2 < x <= P
  std::int64_t micro_limit = 0;  // Y; microsquare variable y satisfies 1 <= y <= Y
  double scale = 0.0;            // X with P = floor(sqrt(X))

  static ThetaParams from_scale(double x_scale, std::int64_t micro) {
    if (!(x_scale >= 16.0)) throw std::invalid_argument("ThetaParams: scale must be >= 16");
    ThetaParams tp;
    tp.scale = x_scale;
    tp.main_limit = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(x_scale)));
    tp.micro_limit = micro;
    tp.ensure_valid();
    return tp;
  }

  void ensure_valid() const {
    if (main_limit < 4) throw std::invalid_argument("ThetaParams: main_limit must be >= 4");
    if (micro_limit < 1 || micro_limit > main_limit)
      throw std::invalid_argument("ThetaParams: need 1 <= micro_limit <= main_limit");
    if (!(scale >= 16.0) || static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(scale))) != main_limit)
      throw std::invalid_argument("ThetaParams: scale inconsistent with main_limit");
  }

  std::int64_t main_first() const { return main_limit / 2 + 1; }
  std::int64_t main_terms() const { return main_limit - main_limit / 2; }
};

namespace detail {

// Shared table of roots of unity: table[k] = e(k/q) for 0 <= k < q.
// Cached behind a mutex; when the cache grows past its budget it is cleared
// wholesale (outstanding shared_ptr holders keep their tables alive).
inline std::shared_ptr<const std::vector<Complex>> unit_root_table(std::int64_t q) {
  if (q < 1) throw std::invalid_argument("unit_root_table: q must be >= 1");
  constexpr std::int64_t kCacheLimit = std::int64_t(1) << 16;   // largest cached q
  constexpr std::int64_t kBudget = std::int64_t(1) << 22;       // total cached entries
  static std::mutex mu;
  static std::map<std::int64_t, std::shared_ptr<const std::vector<Complex>>> cache;
  static std::int64_t cached_entries = 0;

  if (q <= kCacheLimit) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
  }
  auto table = std::make_shared<std::vector<Complex>>();
  table->reserve(q);
  for (std::int64_t k = 0; k < q; ++k) {
    // Quarter-turn angles get exact values so cancellations like the q = 2
    // sum (1 + e(1/2) = 0) hold to the bit, not just to rounding.
    if ((4 * k) % q == 0) {
      switch ((4 * k) / q) {
        case 0: table->push_back(Complex(1.0, 0.0)); continue;
        case 1: table->push_back(Complex(0.0, 1.0)); continue;
        case 2: table->push_back(Complex(-1.0, 0.0)); continue;
        default: table->push_back(Complex(0.0, -1.0)); continue;
      }
    }
    table->push_back(unit_phase(static_cast<double>(k) / static_cast<double>(q)));
  }
  std::shared_ptr<const std::vector<Complex>> out = table;
  if (q <= kCacheLimit) {
    std::lock_guard<std::mutex> lock(mu);
    if (cached_entries + q > kBudget) {
      cache.clear();
      cached_entries = 0;
    }
    auto [it, inserted] = cache.emplace(q, out);
    if (inserted) cached_entries += q;
    out = it->second;
  }
  return out;
}

// Number of r in [1, q] with r^2 = k (mod q), as a sparse (k, count) list.
inline std::vector<std::pair<std::int64_t, std::int64_t>> square_counts(std::int64_t q) {
  std::vector<std::int64_t> cnt(static_cast<std::size_t>(q), 0);
  for (std::int64_t r = 1; r <= q; ++r) ++cnt[static_cast<std::size_t>((r * r) % q)];
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t k = 0; k < q; ++k)
    if (cnt[static_cast<std::size_t>(k)] > 0) out.emplace_back(k, cnt[static_cast<std::size_t>(k)]);
  return out;
}

}  // namespace detail

// Quadratic Gauss sum S(q, a) = sum_{r=1}^{q} e(a r^2 / q), evaluated from the
// definition. Valid for any integer a (reduced mod q); no coprimality needed.
inline Complex gauss_sum_direct(std::int64_t q, std::int64_t a) {
  if (q < 1) throw std::invalid_argument("gauss_sum_direct: q must be >= 1");
  const std::int64_t ared = ((a % q) + q) % q;
  const auto roots = detail::unit_root_table(q);
  Complex s = 0.0;
  for (std::int64_t r = 1; r <= q; ++r) {
    const std::int64_t k = (ared * ((r * r) % q)) % q;
    s += (*roots)[static_cast<std::size_t>(k)];
  }
  return s;
}

namespace detail {

// S(p, a) for an odd prime p and gcd(a, p) = 1: the classical evaluation
//   S(p, a) = (a|p) * sqrt(p)      when p = 1 (mod 4),
//   S(p, a) = (a|p) * i * sqrt(p)  when p = 3 (mod 4).
inline Complex gauss_sum_odd_prime(std::int64_t p, std::int64_t a) {
  const double root = std::sqrt(static_cast<double>(p));
  const int chi = legendre_symbol(a, static_cast<std::uint64_t>(p));
  if (p % 4 == 1) return Complex(chi * root, 0.0);
  return Complex(0.0, chi * root);
}

// S(p^h, a) for odd p, gcd(a, p) = 1: the sum telescopes down two exponents
// at a time, S(p^(2l), a) = p^l and S(p^(2l+1), a) = p^l S(p, a).
inline Complex gauss_sum_odd_prime_power(std::int64_t p, int h, std::int64_t a) {
  double scale = 1.0;
  for (int i = 0; i < h / 2; ++i) scale *= static_cast<double>(p);
  if (h % 2 == 0) return Complex(scale, 0.0);
  return scale * gauss_sum_odd_prime(p, a % p);
}

}  // namespace detail

// Closed-form quadratic Gauss sum for gcd(a, q) = 1. Odd prime powers use the
// two-step reduction above; powers of 2 are summed directly (no closed form is
// relied on there); composite q splits by multiplicativity,
//   S(q1 q2, a) = S(q1, a q2) S(q2, a q1)  for coprime q1, q2,
// which follows from r = r1 q2 + r2 q1 running over residues mod q1 q2.
inline Complex gauss_sum(std::int64_t q, std::int64_t a) {
  if (q < 1) throw std::invalid_argument("gauss_sum: q must be >= 1");
  const std::int64_t ared = ((a % q) + q) % q;
  if (std::gcd(ared == 0 ? q : ared, q) != 1)
    throw std::invalid_argument("gauss_sum: a must be coprime to q");
  if (q == 1) return Complex(1.0, 0.0);
  const Factorization f = factorize(static_cast<std::uint64_t>(q));
  Complex prod(1.0, 0.0);
  for (const auto& pp : f.factors) {
    std::int64_t ph = 1;
    for (int i = 0; i < pp.exponent; ++i) ph *= static_cast<std::int64_t>(pp.prime);
    const std::int64_t cofactor = q / ph;
    const std::int64_t local_a = (static_cast<std::int64_t>(
                                     detail::mulmod(static_cast<std::uint64_t>(ared % ph),
                                                    static_cast<std::uint64_t>(cofactor % ph),
                                                    static_cast<std::uint64_t>(ph))));
    if (pp.prime == 2) {
      prod *= gauss_sum_direct(ph, local_a);
    } else {
      prod *= detail::gauss_sum_odd_prime_power(static_cast<std::int64_t>(pp.prime), pp.exponent,
                                                local_a);
    }
  }
  return prod;
}

namespace detail {

// Cached row of Gauss sums: row[a] = S(q, a) for every a in [0, q) coprime to
// q (other slots hold 0). Built by grouping the defining sum over equal
// squares, so a full row costs O(q * #distinct squares mod q).
inline std::shared_ptr<const std::vector<Complex>> gauss_sum_row(std::int64_t q) {
  constexpr std::int64_t kCacheLimit = std::int64_t(1) << 14;
  constexpr std::int64_t kBudget = std::int64_t(1) << 21;
  static std::mutex mu;
  static std::map<std::int64_t, std::shared_ptr<const std::vector<Complex>>> cache;
  static std::int64_t cached_entries = 0;

  if (q <= kCacheLimit) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
  }
  const auto roots = unit_root_table(q);
  const auto squares = square_counts(q);
  auto row = std::make_shared<std::vector<Complex>>(static_cast<std::size_t>(q), Complex(0.0, 0.0));
  for (std::int64_t a = 0; a < q; ++a) {
    if (std::gcd(a == 0 ? q : a, q) != 1) continue;
    Complex s = 0.0;
    for (const auto& [k, c] : squares)
      s += static_cast<double>(c) * (*roots)[static_cast<std::size_t>((a * k) % q)];
    (*row)[static_cast<std::size_t>(a)] = s;
  }
  std::shared_ptr<const std::vector<Complex>> out = row;
  if (q <= kCacheLimit) {
    std::lock_guard<std::mutex> lock(mu);
    if (cached_entries + q > kBudget) {
      cache.clear();
      cached_entries = 0;
    }
    auto [it, inserted] = cache.emplace(q, out);
    if (inserted) cached_entries += q;
    out = it->second;
  }
  return out;
}

}  // namespace detail

// Ramanujan sum c_q(m) = sum over a in [1, q] coprime to q of e(a m / q).
// Evaluated exactly as mu(q/g) * phi(q) / phi(q/g) with g = gcd(q, m); the
// division is exact because phi(d) divides phi(q) whenever d divides q.
inline std::int64_t ramanujan_sum(std::int64_t q, std::int64_t m) {
  if (q < 1) throw std::invalid_argument("ramanujan_sum: q must be >= 1");
  const std::int64_t r = ((m % q) + q) % q;
  const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(r));
  const std::uint64_t d = static_cast<std::uint64_t>(q) / g;
  const int mu = moebius(d);
  if (mu == 0) return 0;
  const std::uint64_t phi_q = euler_totient(static_cast<std::uint64_t>(q));
  const std::uint64_t phi_d = euler_totient(d);
  return mu * static_cast<std::int64_t>(phi_q / phi_d);
}

// Main generating sum over the upper dyadic square range:
//   sum over P/2 < x <= P of e(alpha x^2).
inline Complex main_sum(double alpha, const ThetaParams& tp) {
  tp.ensure_valid();
  Complex s = 0.0;
  for (std::int64_t x = tp.main_first(); x <= tp.main_limit; ++x) {
    const double phase = alpha * static_cast<double>(x) * static_cast<double>(x);
    s += unit_phase(phase - std::floor(phase));
  }
  return s;
}

// Microsquare generating sum: sum over 1 <= y <= Y of e(alpha y^2).
inline Complex micro_sum(double alpha, const ThetaParams& tp) {
  tp.ensure_valid();
  Complex s = 0.0;
  for (std::int64_t y = 1; y <= tp.micro_limit; ++y) {
    const double phase = alpha * static_cast<double>(y) * static_cast<double>(y);
    s += unit_phase(phase - std::floor(phase));
  }
  return s;
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration
// on the Legendre recurrence (accurate to machine precision for small k).
inline const std::vector<std::pair<double, double>>& legendre_rule(int k) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<double, double>> rule;
  rule.reserve(k);
  const double pi = kTau / 2.0;
  for (int i = 0; i < k; ++i) {
    double x = std::cos(pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
  }
  return cache.emplace(k, std::move(rule)).first->second;
}

// Composite 16-node Gauss-Legendre approximation to
// integral over (P/2, P) of e(beta g^2) dg with a fixed panel count.
inline Complex oscillatory_panels(double beta, double lo, double hi, std::int64_t panels) {
  const auto& rule = legendre_rule(16);
  const double h = (hi - lo) / static_cast<double>(panels);
  std::vector<Complex> part(static_cast<std::size_t>(panels));
  for (std::int64_t p = 0; p < panels; ++p) {
    const double a = lo + h * static_cast<double>(p);
    const double mid = a + 0.5 * h;
    Complex s = 0.0;
    for (const auto& [node, weight] : rule) {
      const double g = mid + 0.5 * h * node;
      s += weight * unit_phase(beta * g * g);
    }
    part[static_cast<std::size_t>(p)] = s * (0.5 * h);
  }
  return pairwise_sum(part);
}

}  // namespace detail

// Oscillatory integral over the main range,
//   integral over (P/2, P) of e(beta gamma^2) d gamma,
// the continuous analogue of main_sum near a rational point. Composite
// Gauss-Legendre panels sized so each panel sees at most ~pi/4 of phase, then
// panel doubling until two refinements agree within 1e-8 * P.
inline Complex oscillatory_integral(double beta, const ThetaParams& tp) {
  tp.ensure_valid();
  if (std::abs(beta) > 1.0) throw std::invalid_argument("oscillatory_integral: |beta| must be <= 1");
  const double lo = 0.5 * static_cast<double>(tp.main_limit);
  const double hi = static_cast<double>(tp.main_limit);
  const double total_phase = kTau * std::abs(beta) * (hi * hi - lo * lo);
  const double tol = 1e-8 * static_cast<double>(tp.main_limit);
  constexpr std::int64_t kBudget = std::int64_t(1) << 22;
  std::int64_t panels = 4;
  while (static_cast<double>(panels) * (kTau / 8.0) < total_phase && panels < kBudget) panels *= 2;
  Complex prev = detail::oscillatory_panels(beta, lo, hi, panels);
  while (true) {
    if (panels > kBudget)
      throw std::runtime_error("oscillatory_integral: quadrature budget exceeded");
    const Complex next = detail::oscillatory_panels(beta, lo, hi, panels * 2);
    if (std::abs(next - prev) <= tol) return next;
    prev = next;
    panels *= 2;
  }
}

}  // namespace microsq
