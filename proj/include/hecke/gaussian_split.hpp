#pragma once

// Split primes in imaginary quadratic fields: representations p = a^2 + D b^2,
// the primary normal form for Q(i), Hecke angles, and the P_eps predicate.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

#include "hecke/arith.hpp"

namespace hecke {

/// D with Q(sqrt(-D)) of class number one.
inline constexpr u64 kClassNumberOneD[] = {1, 2, 3, 7, 11, 19, 43, 67, 163};

constexpr bool is_class_number_one(u64 D) {
    for (u64 d : kClassNumberOneD)
        if (d == D) return true;
    return false;
}

struct SplitPrime {
    u64 p = 0;
    u64 D = 1;
    i64 a = 0;
    i64 b = 0;
    double theta = 0.0;  ///< Hecke angle in [0,1); meaningful for D == 1
    double ratio = 0.0;  ///< a / sqrt(p)
};

namespace detail {

inline std::optional<std::pair<u64, u64>> represent_by_search(u64 p, u64 D) {
    for (u64 b = 1; D * b * b < p; ++b) {
        const u64 rest = p - D * b * b;
        if (is_square(rest)) return std::pair{isqrt(rest), b};
    }
    return std::nullopt;
}

}  // namespace detail

/// Cornacchia's algorithm: (a, b) with a^2 + D b^2 = p, a > 0, b > 0, or
/// nullopt when p has no such representation.
inline std::optional<std::pair<u64, u64>> cornacchia(u64 p, u64 D) {
    if (D < 1 || D > 163) throw std::domain_error("cornacchia: D must lie in [1, 163]");
    if (p < 2) throw std::domain_error("cornacchia: p must be prime");
    if (p <= D || (D > 1 && p % D == 0) || p == 2) return detail::represent_by_search(p, D);

    const auto root = sqrt_mod(p - D % p, p);
    if (!root) return std::nullopt;
    u64 r0 = *root;
    if (2 * r0 > p) r0 = p - r0;

    u64 x = p;
    u64 y = r0;
    const u64 bound = isqrt(p);
    while (y > bound) {
        const u64 t = x % y;
        x = y;
        y = t;
    }
    const u64 rest = p - y * y;
    if (rest % D != 0) return std::nullopt;
    const u64 b2 = rest / D;
    if (b2 == 0 || !is_square(b2)) return std::nullopt;
    if (y == 0) return std::nullopt;
    const u64 b = isqrt(b2);
    // For D = 1 both orders solve; the odd component goes first.
    if (D == 1 && y % 2 == 0) return std::pair{b, y};
    return std::pair{y, b};
}

/// Hecke angle of a + bi for the degree-4 character of Q(i): 4 arg(a+bi) / 2pi mod 1.
inline double hecke_angle(i64 a, i64 b) {
    const double turns = 4.0 * std::atan2(static_cast<double>(b), static_cast<double>(a)) /
                         (2.0 * std::numbers::pi);
    double theta = turns - std::floor(turns);
    if (theta >= 1.0) theta = 0.0;
    return theta;
}

inline double hecke_angle(const SplitPrime& s) {
    if (s.D != 1) throw std::domain_error("hecke_angle: only defined for D = 1");
    return hecke_angle(s.a, s.b);
}

/// Normal form of p = a^2 + b^2 with a odd, a = 1 mod 4 and b > 0. Returns
/// nullopt for p = 2 and p = 3 mod 4.
inline std::optional<SplitPrime> canonical_split(u64 p) {
    if (p % 4 != 1) return std::nullopt;
    const auto rep = cornacchia(p, 1);
    if (!rep) return std::nullopt;
    auto [x, y] = *rep;
    if (x % 2 == 0) std::swap(x, y);
    i64 a = static_cast<i64>(x);
    if (mod_floor(a, 4) != 1) a = -a;
    SplitPrime s;
    s.p = p;
    s.D = 1;
    s.a = a;
    s.b = static_cast<i64>(y);
    s.ratio = static_cast<double>(a) / std::sqrt(static_cast<double>(p));
    s.theta = hecke_angle(s.a, s.b);
    return s;
}

/// Applies the primary sign convention to any decomposition of p.
inline SplitPrime normalize_split(u64 p, i64 a, i64 b) {
    if (a % 2 == 0) std::swap(a, b);
    if (mod_floor(a, 4) != 1) a = -a;
    if (b < 0) b = -b;
    SplitPrime s;
    s.p = p;
    s.a = a;
    s.b = b;
    s.ratio = static_cast<double>(a) / std::sqrt(static_cast<double>(p));
    s.theta = hecke_angle(a, b);
    return s;
}

/// |a| <= eps sqrt(p), compared exactly as a^2 <= eps^2 p.
inline bool within_eps(const SplitPrime& s, double eps) {
    const long double lhs = static_cast<long double>(s.a) * s.a;
    const long double rhs = static_cast<long double>(eps) * eps * s.p;
    return lhs <= rhs;
}

/// Membership in P_eps = { p = a^2 + b^2 : |a| <= eps sqrt(p) }.
inline bool in_P_eps(u64 p, double eps) {
    if (!(eps > 0.0) || eps > 1.0) throw std::domain_error("in_P_eps: eps must lie in (0, 1]");
    const auto s = canonical_split(p);
    return s && within_eps(*s, eps);
}

}  // namespace hecke
