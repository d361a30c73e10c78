#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "microsq/arith.hpp"
#include "microsq/util.hpp"

namespace microsq {

namespace detail {

// Smallest quadratic non-residue of an odd prime p.
inline std::uint64_t least_nonresidue(std::uint64_t p) {
  for (std::uint64_t d = 2;; ++d) {
    if (legendre_symbol(static_cast<std::int64_t>(d), p) == -1) return d;
  }
}

// x with x^2 = -1 (mod p) for p = 1 (mod 4): x = d^((p-1)/4) for a non-residue d.
inline std::uint64_t sqrt_minus_one(std::uint64_t p) {
  const std::uint64_t d = least_nonresidue(p);
  const std::uint64_t x = powmod(d, (p - 1) / 4, p);
  if (mulmod(x, x, p) != p - 1)
    throw std::logic_error("sqrt_minus_one: construction failed");
  return x;
}

// Cornacchia descent: (a, b) with a^2 + b^2 = p, for p = 1 (mod 4).
// Run the Euclidean remainder sequence from (p, x) with x^2 = -1 (mod p);
// the first remainder at or below sqrt(p) is one leg of the decomposition.
inline std::pair<std::uint64_t, std::uint64_t> gaussian_prime(std::uint64_t p) {
  std::uint64_t prev = p, cur = sqrt_minus_one(p);
  const std::uint64_t bound = isqrt(p);
  while (cur > bound) {
    const std::uint64_t t = prev % cur;
    prev = cur;
    cur = t;
  }
  const std::uint64_t rest = p - cur * cur;
  const std::uint64_t b = isqrt(rest);
  if (b * b != rest) throw std::logic_error("gaussian_prime: descent failed");
  return {cur, b};
}

struct GaussInt {
  std::int64_t re = 0;
  std::int64_t im = 0;
};

inline GaussInt gmul(const GaussInt& u, const GaussInt& v) {
  const __int128 re = static_cast<__int128>(u.re) * v.re - static_cast<__int128>(u.im) * v.im;
  const __int128 im = static_cast<__int128>(u.re) * v.im + static_cast<__int128>(u.im) * v.re;
  GaussInt out{static_cast<std::int64_t>(re), static_cast<std::int64_t>(im)};
  if (static_cast<__int128>(out.re) != re || static_cast<__int128>(out.im) != im)
    throw std::overflow_error("gmul: component out of 64-bit range");
  return out;
}

}  // namespace detail

// All unordered decompositions m = a^2 + b^2 with 0 <= a <= b, sorted.
// Pairs with a = 0 are omitted unless allow_zero is set. Empty exactly when
// some prime p = 3 (mod 4) divides m to an odd power (classical criterion).
//
// Construction: factor m over the Gaussian integers. Primes p = 3 (mod 4)
// must appear to even powers and contribute a rational factor p^(e/2); the
// prime 2 ramifies as (1+i)^2 up to units; each p = 1 (mod 4) splits as
// pi * conj(pi), and the choice of k in pi^k conj(pi)^(e-k) enumerates every
// inequivalent divisor class. Multiplying the choices and normalizing by
// units yields every representation exactly once (up to order and signs).
inline std::vector<std::pair<std::int64_t, std::int64_t>> two_square_decompositions(
    std::uint64_t m, bool allow_zero = false) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  if (m == 0) {
    if (allow_zero) out.emplace_back(0, 0);
    return out;
  }
  const Factorization f = factorize(m);
  int two_exp = 0;
  std::uint64_t rational_part = 1;
  std::vector<PrimePower> split_primes;
  for (const auto& pp : f.factors) {
    if (pp.prime == 2) {
      two_exp = pp.exponent;
    } else if (pp.prime % 4 == 1) {
      split_primes.push_back(pp);
    } else {
      if (pp.exponent % 2 != 0) return out;
      for (int i = 0; i < pp.exponent / 2; ++i) rational_part *= pp.prime;
    }
  }

  detail::GaussInt base{static_cast<std::int64_t>(rational_part), 0};
  for (int i = 0; i < two_exp; ++i) base = detail::gmul(base, {1, 1});

  std::vector<std::vector<detail::GaussInt>> choices;
  for (const auto& pp : split_primes) {
    const auto [a, b] = detail::gaussian_prime(pp.prime);
    const detail::GaussInt pi{static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)};
    const detail::GaussInt pibar{static_cast<std::int64_t>(a), -static_cast<std::int64_t>(b)};
    std::vector<detail::GaussInt> opts;
    opts.reserve(pp.exponent + 1);
    for (int k = 0; k <= pp.exponent; ++k) {
      detail::GaussInt v{1, 0};
      for (int i = 0; i < k; ++i) v = detail::gmul(v, pi);
      for (int i = k; i < pp.exponent; ++i) v = detail::gmul(v, pibar);
      opts.push_back(v);
    }
    choices.push_back(std::move(opts));
  }

  std::set<std::pair<std::int64_t, std::int64_t>> found;
  std::vector<std::size_t> idx(choices.size(), 0);
  for (;;) {
    detail::GaussInt z = base;
    for (std::size_t i = 0; i < choices.size(); ++i) z = detail::gmul(z, choices[i][idx[i]]);
    std::int64_t a = z.re < 0 ? -z.re : z.re;
    std::int64_t b = z.im < 0 ? -z.im : z.im;
    if (a > b) std::swap(a, b);
    found.emplace(a, b);
    std::size_t i = 0;
    while (i < choices.size() && ++idx[i] == choices[i].size()) {
      idx[i] = 0;
      ++i;
    }
    if (i == choices.size()) break;
  }

  for (const auto& [a, b] : found) {
    if (a == 0 && !allow_zero) continue;
    out.emplace_back(a, b);
  }
  return out;
}

// Sum-of-two-squares membership from a factorization (zeros allowed).
inline bool is_sum_of_two_squares(const Factorization& f) {
  for (const auto& pp : f.factors)
    if (pp.prime % 4 == 3 && pp.exponent % 2 != 0) return false;
  return true;
}

inline bool is_sum_of_two_squares(std::uint64_t m) {
  if (m == 0) return true;
  return is_sum_of_two_squares(factorize(m));
}

// Membership with both parts positive. Given the two-square criterion holds,
// the only obstruction is m = 2^e * s^2 with even e and no prime 1 (mod 4):
// every Gaussian divisor class then collapses to the single pair (0, sqrt(m)).
inline bool has_positive_two_square(const Factorization& f) {
  if (!is_sum_of_two_squares(f)) return false;
  int two_exp = 0;
  bool split = false;
  for (const auto& pp : f.factors) {
    if (pp.prime == 2) two_exp = pp.exponent;
    if (pp.prime % 4 == 1) split = true;
  }
  return split || (two_exp % 2 != 0);
}

inline bool has_positive_two_square(std::uint64_t m) {
  if (m == 0) return false;
  return has_positive_two_square(factorize(m));
}

// Ordered pair count: each unordered (a, b) with 0 < a < b contributes 2,
// (a, a) contributes 1; with allow_zero, (0, b) contributes 2 and (0, 0)
// contributes 1.
inline std::int64_t ordered_two_square_count(std::uint64_t m, bool allow_zero = false) {
  std::int64_t count = 0;
  for (const auto& [a, b] : two_square_decompositions(m, allow_zero)) {
    if (a == 0 && b == 0)
      count += 1;
    else if (a == 0)
      count += 2;
    else if (a == b)
      count += 1;
    else
      count += 2;
  }
  return count;
}

// Bitmap of sums of two squares up to a limit, for scan workloads where a
// per-value factorization would dominate. positive_only marks a^2 + b^2 with
// a, b >= 1, otherwise a, b >= 0.
class TwoSquareSieve {
 public:
  TwoSquareSieve(std::uint64_t limit, bool positive_only)
      : limit_(limit), positive_only_(positive_only), bits_((limit >> 6) + 1, 0) {
    const std::uint64_t amin = positive_only ? 1 : 0;
    for (std::uint64_t a = amin; a * a <= limit; ++a) {
      const std::uint64_t a2 = a * a;
      for (std::uint64_t b = a; a2 + b * b <= limit; ++b) set(a2 + b * b);
    }
  }

  bool contains(std::uint64_t m) const {
    if (m > limit_) throw std::out_of_range("TwoSquareSieve: query above limit");
    return (bits_[m >> 6] >> (m & 63)) & 1;
  }

  std::uint64_t limit() const { return limit_; }
  bool positive_only() const { return positive_only_; }

 private:
  void set(std::uint64_t m) { bits_[m >> 6] |= std::uint64_t(1) << (m & 63); }

  std::uint64_t limit_;
  bool positive_only_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace microsq
