#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "microsq/arith.hpp"
#include "microsq/exp_sums.hpp"
#include "microsq/rational.hpp"
#include "microsq/util.hpp"

namespace microsq {

// ---------------------------------------------------------------------------
// Local density at modulus q for the three-squares count:
//   A(q; n) = q^-3 * sum over a in [1, q], gcd(a, q) = 1, of S(q, a)^3 e(-n a / q).
// A is multiplicative in q; odd prime powers admit exact rational closed
// forms, while powers of two are evaluated from the definition.
// ---------------------------------------------------------------------------

// Definition route. Cost O(q^2) through the grouped Gauss-sum rows, so the
// workable range is q <= 10^5. The value is provably real; the imaginary
// part of the float evaluation is checked below 1e-9 before discarding it.
inline double local_density_direct(std::int64_t q, std::int64_t n) {
  if (q < 1 || q > 100000) throw std::invalid_argument("local_density_direct: need 1 <= q <= 1e5");
  if (n < 1) throw std::invalid_argument("local_density_direct: n must be positive");
  const auto row = detail::gauss_sum_row(q);
  const auto roots = detail::unit_root_table(q);
  const std::int64_t neg_n = (q - (n % q)) % q;
  Complex s = 0.0;
  for (std::int64_t a = 1; a <= q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    const Complex sa = (*row)[static_cast<std::size_t>(a % q)];
    s += sa * sa * sa * (*roots)[static_cast<std::size_t>((neg_n * a) % q)];
  }
  const double q3 = static_cast<double>(q) * static_cast<double>(q) * static_cast<double>(q);
  const double re = s.real() / q3, im = s.imag() / q3;
  if (std::abs(im) >= 1e-9)
    throw std::runtime_error("local_density_direct: imaginary part exceeds 1e-9");
  return re;
}

// Exact value of A(p^h; n) for an odd prime p. Writing v for the exact power
// of p dividing n:
//   h = 2l (l >= 1):   (p-1)/p^(l+1) if v >= 2l; -1/p^(l+1) if v = 2l-1; else 0.
//   h = 2l+1 (l >= 0): chi_p(-n/p^(2l)) / p^(l+1), but only when v = 2l exactly
//                      (chi_p is the Legendre symbol); else 0.
//   h = 0: 1.
inline Rational local_density_odd_prime_power(std::int64_t p, int h, std::int64_t n) {
  if (p < 3 || p % 2 == 0 || !is_prime(static_cast<std::uint64_t>(p)))
    throw std::invalid_argument("local_density_odd_prime_power: p must be an odd prime");
  if (h < 0) throw std::invalid_argument("local_density_odd_prime_power: h must be >= 0");
  if (n < 1) throw std::invalid_argument("local_density_odd_prime_power: n must be positive");
  if (h == 0) return Rational(1);
  const int v = valuation(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(p));
  const int l = h / 2;
  std::int64_t p_l1 = 1;  // p^(l+1)
  for (int i = 0; i <= l; ++i) p_l1 *= p;
  if (h % 2 == 0) {
    if (v >= 2 * l) return Rational(p - 1, p_l1);
    if (v == 2 * l - 1) return Rational(-1, p_l1);
    return Rational(0);
  }
  if (v != 2 * l) return Rational(0);
  std::int64_t reduced = n;
  for (int i = 0; i < v; ++i) reduced /= p;
  const int chi = legendre_symbol(-reduced, static_cast<std::uint64_t>(p));
  return Rational(chi, p_l1);
}

// Multiplicative evaluation: odd prime powers by the closed forms above,
// the 2-part from the definition.
inline double local_density(std::int64_t q, std::int64_t n) {
  if (q < 1) throw std::invalid_argument("local_density: q must be >= 1");
  if (n < 1) throw std::invalid_argument("local_density: n must be positive");
  if (q == 1) return 1.0;
  const Factorization f = factorize(static_cast<std::uint64_t>(q));
  double prod = 1.0;
  for (const auto& pp : f.factors) {
    if (pp.prime == 2) {
      std::int64_t ph = 1;
      for (int i = 0; i < pp.exponent; ++i) ph *= 2;
      prod *= local_density_direct(ph, n);
    } else {
      const Rational r = local_density_odd_prime_power(static_cast<std::int64_t>(pp.prime),
                                                       pp.exponent, n);
      if (r.is_zero()) return 0.0;
      prod *= r.value();
    }
  }
  return prod;
}

// Partial sum of the 2-adic local factor: sum over 0 <= h <= H of A(2^h; n).
// For H >= 3 and n with 4 not dividing n and n != 7 (mod 8), the value is
// provably at least 2^-6; that floor is asserted (with the 1e-9 slack of the
// double evaluation, since equality is attained, e.g. at n = 1).
inline double two_adic_partial_sum(int H, std::int64_t n) {
  if (H < 0 || H > 20) throw std::invalid_argument("two_adic_partial_sum: need 0 <= H <= 20");
  if (n < 1) throw std::invalid_argument("two_adic_partial_sum: n must be positive");
  double total = 1.0;
  std::int64_t ph = 1;
  for (int h = 1; h <= H; ++h) {
    ph *= 2;
    total += local_density_direct(ph, n);
  }
  if (H >= 3 && n % 4 != 0 && n % 8 != 7 && total < 0.015625 - 1e-9)
    throw std::runtime_error("two_adic_partial_sum: 2^-6 floor violated at n = " + std::to_string(n));
  return total;
}

// Exact partial sum of an odd local factor: sum over 0 <= h <= H of A(p^h; n),
// as a rational. The floor 1 - 1/p holds for every H and n and is asserted
// exactly (no tolerance).
inline Rational odd_prime_partial_sum(std::int64_t p, int H, std::int64_t n) {
  if (H < 0) throw std::invalid_argument("odd_prime_partial_sum: H must be >= 0");
  Rational total(1);
  for (int h = 1; h <= H; ++h) total += local_density_odd_prime_power(p, h, n);
  if (total < Rational(p - 1, p))
    throw std::runtime_error("odd_prime_partial_sum: (1 - 1/p) floor violated at p = " +
                             std::to_string(p) + ", n = " + std::to_string(n));
  return total;
}

namespace detail {

inline std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
  std::vector<std::int64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    primes.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return primes;
}

}  // namespace detail

// Largest H with p^H <= W, by repeated multiplication (no float logs).
inline int max_exponent_below(std::int64_t p, double W) {
  if (p < 2) throw std::invalid_argument("max_exponent_below: p must be >= 2");
  int h = 0;
  std::int64_t power = 1;
  while (static_cast<double>(power) * static_cast<double>(p) <= W) {
    power *= p;
    ++h;
  }
  return h;
}

// Truncation cutoff preset tying W to the scale: W = (log X)^(1/5).
inline double default_cutoff(double x_scale) {
  if (!(x_scale > 1.0)) throw std::invalid_argument("default_cutoff: scale must exceed 1");
  return std::pow(std::log(x_scale), 0.2);
}

// Sharp truncation of the singular series: sum over q <= W of A(q; n).
inline double singular_series_additive(std::int64_t n, double W) {
  if (n < 1) throw std::invalid_argument("singular_series_additive: n must be positive");
  if (!(W >= 1.0) || W > 10000.0)
    throw std::invalid_argument("singular_series_additive: need 1 <= W <= 1e4");
  double total = 0.0;
  for (std::int64_t q = 1; static_cast<double>(q) <= W; ++q) total += local_density(q, n);
  return total;
}

enum class LocalFactorMethod { OddClosedForm, TwoAdicDirect };

struct LocalFactorRow {
  std::int64_t prime = 0;
  int max_exponent = 0;     // H(p): largest H with p^H <= W
  double partial_sum = 0.0; // sum over h <= H(p) of A(p^h; n)
  LocalFactorMethod method = LocalFactorMethod::OddClosedForm;
};

struct LocalFactorTable {
  std::int64_t n = 0;
  double cutoff = 0.0;  // W
  std::vector<LocalFactorRow> rows;
};

struct SingularSeriesProduct {
  double value = 0.0;
  LocalFactorTable table;
};

// Eulerized truncation: product over primes p <= W of the partial local
// factor sum up to H(p). Exact rational per odd prime, definition route for
// the 2-part; the product itself is a double.
inline SingularSeriesProduct singular_series_multiplicative(std::int64_t n, double W) {
  if (n < 1) throw std::invalid_argument("singular_series_multiplicative: n must be positive");
  if (!(W >= 1.0) || W > 10000.0)
    throw std::invalid_argument("singular_series_multiplicative: need 1 <= W <= 1e4");
  SingularSeriesProduct out;
  out.table.n = n;
  out.table.cutoff = W;
  out.value = 1.0;
  for (std::int64_t p : detail::primes_up_to(static_cast<std::int64_t>(W))) {
    LocalFactorRow row;
    row.prime = p;
    row.max_exponent = max_exponent_below(p, W);
    if (p == 2) {
      row.partial_sum = two_adic_partial_sum(row.max_exponent, n);
      row.method = LocalFactorMethod::TwoAdicDirect;
    } else {
      row.partial_sum = odd_prime_partial_sum(p, row.max_exponent, n).value();
      row.method = LocalFactorMethod::OddClosedForm;
    }
    out.value *= row.partial_sum;
    out.table.rows.push_back(row);
  }
  return out;
}

struct TruncationIdentity {
  double multiplicative = 0.0;   // product form at cutoff W
  double additive = 0.0;         // sharp sum over q <= W
  double tail_sum = 0.0;         // sum over divisors q of Q with q > W
  std::int64_t tail_count = 0;
  std::int64_t modulus_product = 0;  // Q = product of p^H(p) over p <= W
  double residual = 0.0;         // |multiplicative - additive - tail_sum|
};

// Exact bridge between the two truncations: expanding the product form gives
// exactly the sum of A(q; n) over divisors q of Q = prod p^H(p). Every q <= W
// divides Q, so the product equals the sharp sum plus the tail over divisors
// in (W, Q]. The residual of that identity is pure floating-point noise.
inline TruncationIdentity truncation_identity_check(std::int64_t n, double W) {
  TruncationIdentity out;
  std::int64_t Q = 1;
  std::vector<std::pair<std::int64_t, int>> parts;
  for (std::int64_t p : detail::primes_up_to(static_cast<std::int64_t>(W))) {
    const int h = max_exponent_below(p, W);
    parts.emplace_back(p, h);
    for (int i = 0; i < h; ++i) {
      Q *= p;
      if (Q > 10000000)
        throw std::invalid_argument("truncation_identity_check: modulus product exceeds 1e7");
    }
  }
  out.modulus_product = Q;
  out.multiplicative = singular_series_multiplicative(n, W).value;
  out.additive = singular_series_additive(n, W);

  std::vector<std::int64_t> divisors{1};
  for (const auto& [p, h] : parts) {
    const std::size_t base = divisors.size();
    std::int64_t power = 1;
    for (int i = 1; i <= h; ++i) {
      power *= p;
      for (std::size_t j = 0; j < base; ++j) divisors.push_back(divisors[j] * power);
    }
  }
  std::vector<double> tail_terms;
  for (std::int64_t q : divisors) {
    if (static_cast<double>(q) <= W) continue;
    tail_terms.push_back(local_density(q, n));
    ++out.tail_count;
  }
  out.tail_sum = pairwise_sum(tail_terms);
  out.residual = std::abs(out.multiplicative - (out.additive + out.tail_sum));
  return out;
}

struct TruncationGapSample {
  double x_scale = 0.0;
  double cutoff = 0.0;
  std::int64_t stride = 1;
  std::int64_t sample_count = 0;
  double mean_square = 0.0;   // mean of (product form - sharp sum)^2 over the sample
  double max_abs = 0.0;
  double reference = 0.0;     // (X/W + Q log^2 Q) / (X/2), the per-n scale of the bound
  double ratio = 0.0;         // mean_square / reference
};

// Empirical size of the truncation gap over eligible n in (X/2, X], sampled
// with the given stride.
inline TruncationGapSample truncation_gap_stats(double x_scale, double W, std::int64_t stride = 1) {
  if (!(x_scale >= 4.0)) throw std::invalid_argument("truncation_gap_stats: scale too small");
  if (stride < 1) throw std::invalid_argument("truncation_gap_stats: stride must be >= 1");
  TruncationGapSample out;
  out.x_scale = x_scale;
  out.cutoff = W;
  out.stride = stride;
  const std::int64_t lo = static_cast<std::int64_t>(x_scale / 2.0) + 1;
  const std::int64_t hi = static_cast<std::int64_t>(x_scale);
  std::int64_t Q = 1;
  for (std::int64_t p : detail::primes_up_to(static_cast<std::int64_t>(W)))
    for (int i = 0; i < max_exponent_below(p, W); ++i) Q *= p;
  std::vector<double> squares;
  for (std::int64_t n = lo; n <= hi; n += stride) {
    if (!has_tag(classify(static_cast<std::uint64_t>(n)), Eligibility::ThreeSquareEligible))
      continue;
    const double gap = singular_series_multiplicative(n, W).value - singular_series_additive(n, W);
    squares.push_back(gap * gap);
    out.max_abs = std::max(out.max_abs, std::abs(gap));
    ++out.sample_count;
  }
  out.mean_square = out.sample_count == 0 ? 0.0 : pairwise_sum(squares) / static_cast<double>(out.sample_count);
  const double logQ = std::log(static_cast<double>(Q));
  out.reference = (x_scale / W + static_cast<double>(Q) * logQ * logQ) / (x_scale / 2.0);
  out.ratio = out.reference == 0.0 ? 0.0 : out.mean_square / out.reference;
  return out;
}

}  // namespace microsq
