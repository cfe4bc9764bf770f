#pragma once

// Diagonal curves a X^alpha + b Y^beta = c over F_p: affine point counts by
// two independent routes, the trace of Frobenius, and the P_{C,I} predicate.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hecke/arith.hpp"

namespace hecke {

/// Largest exponent accepted by curve_new.
inline constexpr i64 kMaxCurveExponent = 16;

struct CurveSpec {
    i64 a = 1, b = 1, c = 1;
    i64 alpha = 2, beta = 2;
    i64 d = 2;  ///< gcd(alpha, beta)
    i64 M = 2;  ///< lcm(alpha, beta)
    i64 g = 0;  ///< genus

    /// "a,b,c,alpha,beta", the form used by cache headers and the CLI.
    std::string key() const {
        std::ostringstream os;
        os << a << ',' << b << ',' << c << ',' << alpha << ',' << beta;
        return os.str();
    }

    bool operator==(const CurveSpec&) const = default;
};

struct TraceRecord {
    u64 p = 0;
    i64 nd = 0;
    i64 affine_count = 0;
    i64 trace = 0;
    double normalized = 0.0;  ///< trace / (2 g sqrt(p)); 0 when g == 0

    bool operator==(const TraceRecord&) const = default;
};

class CurveError : public std::domain_error {
    using std::domain_error::domain_error;
};

inline CurveSpec curve_new(i64 a, i64 b, i64 c, i64 alpha, i64 beta) {
    if (a == 0 || b == 0 || c == 0) throw CurveError("curve: coefficients must be nonzero");
    if (beta < 2 || alpha < beta) throw CurveError("curve: need alpha >= beta >= 2");
    if (alpha > kMaxCurveExponent) throw CurveError("curve: alpha above the supported cap of 16");
    CurveSpec s{a, b, c, alpha, beta, 0, 0, 0};
    s.d = std::gcd(alpha, beta);
    s.M = std::lcm(alpha, beta);
    const i64 twice_genus = (alpha - 1) * (beta - 1) - (s.d - 1);
    if (twice_genus % 2 != 0) throw CurveError("curve: genus formula gives a non-integer");
    s.g = twice_genus / 2;
    return s;
}

/// Parses "a,b,c,alpha,beta".
inline CurveSpec parse_curve(const std::string& text) {
    std::vector<i64> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CurveError("curve: cannot parse '" + text + "'");
        }
    }
    if (v.size() != 5) throw CurveError("curve: expected a,b,c,alpha,beta");
    return curve_new(v[0], v[1], v[2], v[3], v[4]);
}

inline bool divides_abc(const CurveSpec& s, u64 p) {
    return mod_floor(s.a, p) == 0 || mod_floor(s.b, p) == 0 || mod_floor(s.c, p) == 0;
}

/// True when p = 1 mod M and p does not divide abc.
inline bool is_good_prime(const CurveSpec& s, u64 p) {
    return p % static_cast<u64>(s.M) == 1 && !divides_abc(s, p);
}

/// N_d: d when -a/b is a d-th power residue mod p, else 0.
inline i64 nd(const CurveSpec& s, u64 p) {
    if (divides_abc(s, p)) throw CurveError("nd: p divides abc");
    if (p % static_cast<u64>(s.M) != 1) throw CurveError("nd: requires p = 1 mod M");
    const u64 ratio = mulmod(mod_floor(-s.a, p), invmod_prime(mod_floor(s.b, p), p), p);
    return powmod(ratio, (p - 1) / static_cast<u64>(s.d), p) == 1 ? s.d : 0;
}

/// #{(x,y) in F_p^2 : a x^alpha + b y^beta = c} by tabulating the value
/// distribution of a x^alpha and of c - b y^beta and pairing them up.
inline i64 count_affine_naive(const CurveSpec& s, u64 p) {
    if (divides_abc(s, p)) throw CurveError("count_affine_naive: p divides abc");
    const u64 A = mod_floor(s.a, p), B = mod_floor(s.b, p), C = mod_floor(s.c, p);
    std::vector<std::uint32_t> left(p, 0), right(p, 0);
    for (u64 x = 0; x < p; ++x) {
        ++left[mulmod(A, powmod(x, static_cast<u64>(s.alpha), p), p)];
        const u64 by = mulmod(B, powmod(x, static_cast<u64>(s.beta), p), p);
        ++right[(C + p - by) % p];
    }
    i64 total = 0;
    for (u64 v = 0; v < p; ++v) total += static_cast<i64>(left[v]) * right[v];
    return total;
}

class UnsupportedPrime : public std::domain_error {
    using std::domain_error::domain_error;
};

/// Same count through multiplicative characters. With u = c w and v = c(1-w),
///   N = n_alpha(c) + n_beta(c) + sum_{i,j} chi^i(c/a) psi^j(c/b) J(chi^i, psi^j)
/// where chi, psi have orders alpha and beta and the Jacobi sums are the 2-D
/// character transform of the cyclotomic numbers
///   T[r][s] = #{w != 0,1 : ind w = r mod alpha, ind(1-w) = s mod beta}.
/// Indices are discrete logs to the smallest primitive root.
inline i64 count_affine_charsum(const CurveSpec& s, u64 p) {
    if (divides_abc(s, p)) throw CurveError("count_affine_charsum: p divides abc");
    if (p % static_cast<u64>(s.M) != 1)
        throw UnsupportedPrime("count_affine_charsum: requires p = 1 mod M");
    const u64 al = static_cast<u64>(s.alpha), be = static_cast<u64>(s.beta);

    const u64 g = primitive_root(p);
    std::vector<std::uint32_t> ind(p, 0);
    for (u64 e = 0, x = 1; e + 1 < p; ++e, x = mulmod(x, g, p)) ind[x] = static_cast<std::uint32_t>(e);

    std::vector<i64> cyc(al * be, 0);
    for (u64 w = 2; w < p; ++w) ++cyc[(ind[w] % al) * be + ind[p + 1 - w] % be];

    const u64 A = mod_floor(s.a, p), B = mod_floor(s.b, p), C = mod_floor(s.c, p);
    const u64 ind_ca = ind[mulmod(C, invmod_prime(A, p), p)];
    const u64 ind_cb = ind[mulmod(C, invmod_prime(B, p), p)];

    // Points with y = 0 (u = c) or x = 0 (v = c).
    const i64 boundary = (ind_ca % al == 0 ? s.alpha : 0) + (ind_cb % be == 0 ? s.beta : 0);

    using cd = std::complex<double>;
    const double two_pi = 2.0 * std::numbers::pi;
    cd interior = 0.0;
    for (u64 i = 0; i < al; ++i) {
        for (u64 j = 0; j < be; ++j) {
            cd jacobi = 0.0;
            for (u64 r = 0; r < al; ++r)
                for (u64 t = 0; t < be; ++t)
                    if (const i64 n = cyc[r * be + t])
                        jacobi += static_cast<double>(n) *
                                  std::polar(1.0, two_pi * (static_cast<double>((i * r) % al) / al +
                                                            static_cast<double>((j * t) % be) / be));
            const cd weight = std::polar(
                1.0, two_pi * (static_cast<double>((i * ind_ca) % al) / al +
                               static_cast<double>((j * ind_cb) % be) / be));
            interior += weight * jacobi;
        }
    }
    const double value = static_cast<double>(boundary) + interior.real();
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 0.25 || std::abs(interior.imag()) > 0.25)
        throw std::runtime_error("count_affine_charsum: non-integral character sum");
    return static_cast<i64>(rounded);
}

/// Counts with the character-sum backend when p = 1 mod M, naively otherwise.
inline i64 count_affine(const CurveSpec& s, u64 p) {
    if (p % static_cast<u64>(s.M) == 1) return count_affine_charsum(s, p);
    return count_affine_naive(s, p);
}

inline TraceRecord make_trace_record(const CurveSpec& s, u64 p, i64 nd_value, i64 affine) {
    TraceRecord r;
    r.p = p;
    r.nd = nd_value;
    r.affine_count = affine;
    r.trace = static_cast<i64>(p) + 1 - nd_value - affine;
    r.normalized = s.g > 0 ? static_cast<double>(r.trace) /
                                 (2.0 * static_cast<double>(s.g) * std::sqrt(static_cast<double>(p)))
                           : 0.0;
    return r;
}

/// a_C(p) = p + 1 - N_d - #C(F_p) with the affine count.
inline TraceRecord trace(const CurveSpec& s, u64 p) {
    if (p % static_cast<u64>(s.M) != 1) throw CurveError("trace: requires p = 1 mod M");
    return make_trace_record(s, p, nd(s, p), count_affine(s, p));
}

/// |a_C(p)| <= 2 g sqrt(p), plus one unit of slack for the point-at-infinity convention.
inline bool within_hasse(const CurveSpec& s, const TraceRecord& r) {
    const double bound = 2.0 * static_cast<double>(s.g) * std::sqrt(static_cast<double>(r.p)) + 1.0;
    return std::abs(static_cast<double>(r.trace)) <= bound;
}

inline bool normalized_in(const TraceRecord& r, double lo, double hi) {
    return r.normalized >= lo && r.normalized <= hi;
}

/// Membership in P_{C,I}: p = 1 mod M, p does not divide abc and the
/// normalized trace lies in [lo, hi]. False whenever a precondition fails.
inline bool in_P_CI(const CurveSpec& s, u64 p, double lo, double hi) {
    if (s.g < 1 || lo > hi || lo < -1.0 || hi > 1.0) return false;
    if (!is_prime(p) || !is_good_prime(s, p)) return false;
    return normalized_in(trace(s, p), lo, hi);
}

/// The interval [-eps/(2g), eps/(2g)] describing P_{C,eps}.
inline std::pair<double, double> eps_interval(const CurveSpec& s, double eps) {
    if (s.g < 1) throw CurveError("eps_interval: genus must be positive");
    const double h = eps / (2.0 * static_cast<double>(s.g));
    return {-h, h};
}

}  // namespace hecke
