#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "microsq/util.hpp"

namespace microsq {

struct PrimePower {
  std::uint64_t prime = 0;
  int exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime factorization with strictly increasing primes; empty for n = 1.
struct Factorization {
  std::vector<PrimePower> factors;

  std::uint64_t value() const {
    std::uint64_t v = 1;
    for (const auto& f : factors)
      for (int i = 0; i < f.exponent; ++i) v *= f.prime;
    return v;
  }

  int exponent_of(std::uint64_t p) const {
    for (const auto& f : factors)
      if (f.prime == p) return f.exponent;
    return 0;
  }
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = m == 1 ? 0 : 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

}  // namespace detail

// Deterministic Miller-Rabin, valid for every n < 2^64 with this witness set.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    std::uint64_t x = detail::powmod(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

namespace detail {

// One Floyd cycle attempt at splitting odd composite n, batching gcds.
// Returns 0 when this polynomial x^2 + c finds nothing (caller varies c).
inline std::uint64_t rho_attempt(std::uint64_t n, std::uint64_t c, bool batched) {
  auto step = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
  std::uint64_t x = 2, y = 2, prod = 1;
  for (std::int64_t iter = 1; iter < (std::int64_t(1) << 24); ++iter) {
    x = step(x);
    y = step(step(y));
    if (x == y) return 0;
    const std::uint64_t diff = x > y ? x - y : y - x;
    if (batched) {
      prod = mulmod(prod, diff, n);
      if ((iter & 127) == 0) {
        const std::uint64_t g = std::gcd(prod, n);
        if (g == n) return 0;  // overshot a factor; caller retries unbatched
        if (g > 1) return g;
        prod = 1;
      }
    } else {
      const std::uint64_t g = std::gcd(diff, n);
      if (g == n) return 0;
      if (g > 1) return g;
    }
  }
  return 0;
}

inline std::uint64_t rho_split(std::uint64_t n) {
  for (std::uint64_t c = 1; c < 64; ++c) {
    std::uint64_t g = rho_attempt(n, c, true);
    if (g == 0) g = rho_attempt(n, c, false);
    if (g > 1 && g < n) return g;
  }
  throw std::runtime_error("factorize: failed to split composite " + std::to_string(n));
}

}  // namespace detail

// Trial division by a 2/3/5 wheel up to min(10^6, sqrt(n)), then Miller-Rabin
// plus rho-style splitting for whatever survives. Fully deterministic.
inline Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  if (n >= (1ull << 63)) throw std::invalid_argument("factorize: n must be < 2^63");
  Factorization out;
  auto push = [&out](std::uint64_t p, int e) {
    if (e > 0) out.factors.push_back({p, e});
  };
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    push(p, e);
  }
  static constexpr int kWheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  std::uint64_t d = 7;
  int w = 0;
  while (d <= 1000000 && d * d <= n) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      push(d, e);
    }
    d += kWheel[w];
    w = (w + 1) & 7;
  }
  if (n > 1) {
    if (d * d > n) {
      push(n, 1);  // cofactor below the square of the last trial divisor is prime
    } else {
      std::vector<std::uint64_t> pending{n}, primes;
      while (!pending.empty()) {
        const std::uint64_t m = pending.back();
        pending.pop_back();
        if (is_prime(m)) {
          primes.push_back(m);
          continue;
        }
        const std::uint64_t g = detail::rho_split(m);
        pending.push_back(g);
        pending.push_back(m / g);
      }
      std::sort(primes.begin(), primes.end());
      for (std::size_t i = 0; i < primes.size();) {
        std::size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        push(primes[i], static_cast<int>(j - i));
        i = j;
      }
    }
  }
  return out;
}

// Largest e with p^e | n (n >= 1, p >= 2).
inline int valuation(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw std::invalid_argument("valuation: n must be positive");
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

// Legendre symbol (b|p) for odd prime p, via Euler's criterion.
inline int legendre_symbol(std::int64_t b, std::uint64_t p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("legendre_symbol: p must be an odd prime");
  const std::uint64_t r = static_cast<std::uint64_t>(((b % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p));
  if (r == 0) return 0;
  const std::uint64_t t = detail::powmod(r, (p - 1) / 2, p);
  return t == 1 ? 1 : -1;
}

inline int moebius(std::uint64_t n) {
  const Factorization f = factorize(n);
  for (const auto& pp : f.factors)
    if (pp.exponent >= 2) return 0;
  return (f.factors.size() % 2 == 0) ? 1 : -1;
}

inline std::uint64_t euler_totient(std::uint64_t n) {
  const Factorization f = factorize(n);
  std::uint64_t t = 1;
  for (const auto& pp : f.factors) {
    t *= pp.prime - 1;
    for (int i = 1; i < pp.exponent; ++i) t *= pp.prime;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Congruence-class tags for the counting problems.
//
//   ThreeSquareEligible:  4 does not divide n and n != 7 (mod 8); such n is in
//                         scope for counts with one microsquare and two
//                         unrestricted squares.
//   FourSquareEligible:   8 does not divide n (two microsquares variant).
//   GaussExcluded:        n = 4^l (8k+7), i.e. not a sum of three integer
//                         squares at all. Computed by stripping factors of 4,
//                         independently of the other tags.
// ---------------------------------------------------------------------------

enum class Eligibility : unsigned {
  None = 0,
  ThreeSquareEligible = 1u << 0,
  DivisibleBy4 = 1u << 1,
  SevenMod8 = 1u << 2,
  FourSquareEligible = 1u << 3,
  EightDividesN = 1u << 4,
  GaussEligible = 1u << 5,
  GaussExcluded = 1u << 6,
};

inline Eligibility operator|(Eligibility a, Eligibility b) {
  return static_cast<Eligibility>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
inline Eligibility& operator|=(Eligibility& a, Eligibility b) { return a = a | b; }
inline bool has_tag(Eligibility set, Eligibility tag) {
  return (static_cast<unsigned>(set) & static_cast<unsigned>(tag)) != 0;
}

inline bool gauss_excluded(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("gauss_excluded: n must be positive");
  while (n % 4 == 0) n /= 4;
  return n % 8 == 7;
}

inline Eligibility classify(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("classify: n must be positive");
  Eligibility e = Eligibility::None;
  if (n % 4 == 0) e |= Eligibility::DivisibleBy4;
  if (n % 8 == 7) e |= Eligibility::SevenMod8;
  if (n % 4 != 0 && n % 8 != 7) e |= Eligibility::ThreeSquareEligible;
  if (n % 8 == 0)
    e |= Eligibility::EightDividesN;
  else
    e |= Eligibility::FourSquareEligible;
  if (gauss_excluded(n))
    e |= Eligibility::GaussExcluded;
  else
    e |= Eligibility::GaussEligible;
  return e;
}

namespace detail {

struct EligibilityName {
  Eligibility tag;
  const char* name;
};

inline const std::vector<EligibilityName>& eligibility_names() {
  static const std::vector<EligibilityName> names = {
      {Eligibility::ThreeSquareEligible, "ThreeSquareEligible"},
      {Eligibility::DivisibleBy4, "DivisibleBy4"},
      {Eligibility::SevenMod8, "SevenMod8"},
      {Eligibility::FourSquareEligible, "FourSquareEligible"},
      {Eligibility::EightDividesN, "EightDividesN"},
      {Eligibility::GaussEligible, "GaussEligible"},
      {Eligibility::GaussExcluded, "GaussExcluded"},
  };
  return names;
}

}  // namespace detail

inline std::string to_string(Eligibility set) {
  std::string out;
  for (const auto& [tag, name] : detail::eligibility_names()) {
    if (!has_tag(set, tag)) continue;
    if (!out.empty()) out += '|';
    out += name;
  }
  if (out.empty()) out = "None";
  return out;
}

inline Eligibility eligibility_from_string(const std::string& s) {
  Eligibility e = Eligibility::None;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t bar = s.find('|', pos);
    if (bar == std::string::npos) bar = s.size();
    const std::string token = s.substr(pos, bar - pos);
    bool known = token == "None";  // explicit empty tag set
    for (const auto& [tag, name] : detail::eligibility_names()) {
      if (token == name) {
        e |= tag;
        known = true;
        break;
      }
    }
    if (!known && !token.empty())
      throw std::invalid_argument("eligibility_from_string: unknown tag " + token);
    pos = bar + 1;
  }
  return e;
}

}  // namespace microsq
