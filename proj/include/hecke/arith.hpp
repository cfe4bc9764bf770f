#pragma once

// Modular arithmetic on 64-bit words: products through __int128,
// deterministic Miller-Rabin, Tonelli-Shanks and primitive roots.

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hecke {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

constexpr u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Reduce a signed value into [0, m).
constexpr u64 mod_floor(i64 a, u64 m) {
    const i64 sm = static_cast<i64>(m);
    i64 r = a % sm;
    return static_cast<u64>(r < 0 ? r + sm : r);
}

/// Inverse of a modulo prime p (a must be nonzero mod p).
constexpr u64 invmod_prime(u64 a, u64 p) { return powmod(a, p - 2, p); }

/// floor(sqrt(n)), exact for every 64-bit n.
constexpr u64 isqrt(u64 n) {
    if (n < 2) return n;
    u64 x = n;
    u64 y = (x + 1) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    return x;
}

constexpr bool is_square(u64 n) {
    const u64 r = isqrt(n);
    return r * r == n;
}

namespace detail {

constexpr bool miller_rabin_round(u64 n, u64 a, u64 d, int r) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace detail

/// Witness bases that make Miller-Rabin deterministic for every n < 2^64.
inline constexpr u64 kMillerRabinBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

constexpr bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : kMillerRabinBases) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : kMillerRabinBases)
        if (!detail::miller_rabin_round(n, a, d, r)) return false;
    return true;
}

/// Legendre symbol (a/p) for odd prime p, as -1, 0 or 1.
constexpr int legendre(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// Square root of a modulo an odd prime p, or nullopt when a is a non-residue.
/// The non-residue used by Tonelli-Shanks is the smallest z >= 2, so the
/// returned root is reproducible. Returns the root in [0, p).
inline std::optional<u64> sqrt_mod(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (legendre(a, p) != 1) return std::nullopt;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);

    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (legendre(z, p) != -1) ++z;

    u64 m = static_cast<u64>(s);
    u64 c = powmod(z, q, p);
    u64 t = powmod(a, q, p);
    u64 r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0;
        u64 t2 = t;
        while (t2 != 1) {
            t2 = mulmod(t2, t2, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

/// Distinct prime factors of n by trial division (n small).
inline std::vector<u64> distinct_prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline u64 euler_phi(u64 n) {
    u64 result = n;
    for (u64 f : distinct_prime_factors(n)) result = result / f * (f - 1);
    return result;
}

/// Smallest primitive root modulo prime p.
inline u64 primitive_root(u64 p) {
    if (p == 2) return 1;
    const auto factors = distinct_prime_factors(p - 1);
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (u64 f : factors) {
            if (powmod(g, (p - 1) / f, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: no generator found (p not prime?)");
}

}  // namespace hecke
