#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace microsq {

using Complex = std::complex<double>;

inline constexpr double kTau = 6.2831853071795864769252867665590058;  // 2*pi

// e(z) = exp(2*pi*i*z), the additive character used throughout.
inline Complex unit_phase(double z) { return std::polar(1.0, kTau * z); }

// Floor of sqrt(n), exact for every 64-bit input (double estimate plus fixup).
inline std::uint64_t isqrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  constexpr std::uint64_t kMaxRoot = 4294967295ULL;  // floor(sqrt(2^64 - 1))
  if (r > kMaxRoot) r = kMaxRoot;
  while (r > 0 && r * r > n) --r;
  // r < kMaxRoot keeps (r+1)^2 below 2^64, so the comparison never wraps.
  while (r < kMaxRoot && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_square(std::uint64_t n, std::uint64_t* root = nullptr) {
  const std::uint64_t r = isqrt(n);
  if (root != nullptr) *root = r;
  return r * r == n;
}

namespace detail {

// Worker cap: MICROSQ_THREADS if set, else hardware concurrency. Read per
// call so tests can toggle the environment variable.
inline unsigned thread_cap() {
  if (const char* env = std::getenv("MICROSQ_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

}  // namespace detail

// Cascade summation over a fixed sequence. Split points depend only on the
// length, so the rounding pattern is reproducible run to run.
template <typename T>
inline T pairwise_sum(std::span<const T> v) {
  if (v.size() <= 16) {
    T s{};
    for (const T& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
inline T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v.data(), v.size()));
}

// Runs body(block_index, lo, hi) over [begin, end) split into fixed-size
// blocks. Block boundaries never depend on the worker count, so per-block
// outputs indexed by block_index merge into a result that is byte-identical
// for any thread count.
template <typename Fn>
inline void for_blocks(std::int64_t begin, std::int64_t end, std::int64_t block_size,
                       Fn&& body, bool parallel = true) {
  if (end <= begin) return;
  const std::int64_t blocks = (end - begin + block_size - 1) / block_size;
  auto run = [&](std::int64_t b) {
    const std::int64_t lo = begin + b * block_size;
    const std::int64_t hi = std::min(end, lo + block_size);
    body(b, lo, hi);
  };
  const unsigned workers =
      parallel ? static_cast<unsigned>(std::min<std::int64_t>(detail::thread_cap(), blocks)) : 1u;
  if (workers <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) run(b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t b = next.fetch_add(1);
        if (b >= blocks) return;
        try {
          run(b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Sum of term(i) for i in [0, count): fixed 4096-element blocks, linear within
// a block, pairwise across blocks. Deterministic for any thread count.
template <typename T, typename Fn>
inline T blocked_sum(std::int64_t count, Fn&& term, bool parallel = false) {
  constexpr std::int64_t kBlock = 4096;
  if (count <= 0) return T{};
  const std::int64_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<T> partial(static_cast<std::size_t>(blocks));
  for_blocks(
      0, count, kBlock,
      [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
        T s{};
        for (std::int64_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
      },
      parallel);
  return pairwise_sum(partial);
}

}  // namespace microsq
