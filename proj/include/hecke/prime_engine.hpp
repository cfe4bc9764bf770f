#pragma once

// Segmented sieve of Eratosthenes over [lo, hi) and prime counting.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hecke/arith.hpp"
#include "hecke/parallel.hpp"

namespace hecke {

/// Sieve segment length in integers; roughly one L2 cache worth of bytes.
inline constexpr u64 kDefaultSegment = u64{1} << 18;

inline constexpr u64 kMaxSieveBound = u64{1} << 50;

/// Primes in [lo, hi), ascending.
struct PrimeRange {
    u64 lo = 2;
    u64 hi = 3;
    std::vector<u64> primes;
};

/// Plain sieve of Eratosthenes for [0, n].
inline std::vector<u64> small_primes(u64 n) {
    std::vector<u64> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (u64 i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

namespace detail {

/// Marks primes of [lo, hi) in a byte flag vector using the given base primes
/// (all primes up to sqrt(hi - 1)).
inline void sieve_segment(u64 lo, u64 hi, const std::vector<u64>& base,
                          std::vector<std::uint8_t>& flags) {
    flags.assign(hi - lo, 1);
    for (u64 p : base) {
        if (p * p >= hi) break;
        u64 start = std::max(p * p, (lo + p - 1) / p * p);
        for (u64 j = start; j < hi; j += p) flags[j - lo] = 0;
    }
    for (u64 n = lo; n < std::min<u64>(hi, 2); ++n) flags[n - lo] = 0;
}

struct Segments {
    std::vector<u64> base;
    std::vector<std::pair<u64, u64>> bounds;
};

inline Segments plan_segments(u64 lo, u64 hi, u64 segment) {
    Segments s;
    s.base = small_primes(isqrt(hi - 1));
    for (u64 a = lo; a < hi; a += segment) s.bounds.emplace_back(a, std::min(hi, a + segment));
    return s;
}

inline void check_range(u64 lo, u64 hi) {
    if (lo >= hi) throw std::range_error("sieve_range: empty range (lo >= hi)");
    if (lo < 2) throw std::range_error("sieve_range: lo must be at least 2");
    if (hi > kMaxSieveBound) throw std::range_error("sieve_range: hi exceeds 2^50");
}

}  // namespace detail

/// Exactly the primes in [lo, hi). Segments may be sieved on several threads;
/// they are concatenated in ascending order, so output never depends on
/// `threads` or `segment`.
inline PrimeRange sieve_range(u64 lo, u64 hi, unsigned threads = 1,
                              u64 segment = kDefaultSegment) {
    detail::check_range(lo, hi);
    if (segment == 0) throw std::invalid_argument("sieve_range: segment must be positive");
    const auto plan = detail::plan_segments(lo, hi, segment);
    std::vector<std::vector<u64>> parts(plan.bounds.size());
    parallel_for(plan.bounds.size(), threads, [&](std::size_t i) {
        const auto [a, b] = plan.bounds[i];
        std::vector<std::uint8_t> flags;
        detail::sieve_segment(a, b, plan.base, flags);
        for (u64 n = a; n < b; ++n)
            if (flags[n - a]) parts[i].push_back(n);
    });
    PrimeRange out{lo, hi, {}};
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    out.primes.reserve(total);
    for (const auto& p : parts) out.primes.insert(out.primes.end(), p.begin(), p.end());
    return out;
}

/// Convenience: primes in [2, x].
inline std::vector<u64> primes_up_to(u64 x, unsigned threads = 1) {
    if (x < 2) return {};
    return sieve_range(2, x + 1, threads).primes;
}

/// pi(x), the number of primes <= x.
inline u64 prime_count(u64 x, unsigned threads = 1, u64 segment = kDefaultSegment) {
    if (x < 2) return 0;
    const auto plan = detail::plan_segments(2, x + 1, segment);
    std::vector<u64> counts(plan.bounds.size(), 0);
    parallel_for(plan.bounds.size(), threads, [&](std::size_t i) {
        const auto [a, b] = plan.bounds[i];
        std::vector<std::uint8_t> flags;
        detail::sieve_segment(a, b, plan.base, flags);
        u64 c = 0;
        for (auto f : flags) c += f;
        counts[i] = c;
    });
    u64 total = 0;
    for (u64 c : counts) total += c;
    return total;
}

}  // namespace hecke
