#pragma once

// Goodness-of-fit for angle and trace data: Kolmogorov-Smirnov distance to a
// Measure, the Erdos-Turan two-sided bound with explicit exponential sums, and
// a Bombieri-Vinogradov style discrepancy table over arithmetic progressions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "hecke/arith.hpp"
#include "hecke/measures.hpp"
#include "hecke/parallel.hpp"

namespace hecke {

enum class SampleDomain { interval, angle };  ///< [-1, 1] or [0, 1)

struct EmpiricalDist {
    std::vector<double> samples;
    std::size_t count = 0;
    SampleDomain domain = SampleDomain::interval;

    EmpiricalDist() = default;
    explicit EmpiricalDist(std::vector<double> s, SampleDomain d = SampleDomain::interval)
        : samples(std::move(s)), count(samples.size()), domain(d) {
        for (double x : samples) {
            const bool ok = d == SampleDomain::interval ? (x >= -1.0 && x <= 1.0)
                                                        : (x >= 0.0 && x < 1.0);
            if (!ok) throw std::domain_error("EmpiricalDist: sample outside its declared range");
        }
    }
};

/// sup_t |F_n(t) - F(t)| for a target given by its cdf F(t) = mu([-1, t]) and
/// left limit F(t-), checking both one-sided limits at each sample.
template <typename Cdf, typename CdfLeft>
double ks_distance(const EmpiricalDist& dist, Cdf&& cdf, CdfLeft&& cdf_left) {
    if (dist.samples.empty()) throw std::domain_error("ks_distance: empty sample");
    std::vector<double> xs = dist.samples;
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double worst = 0.0;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        const double below = static_cast<double>(i) / n;  // F_n(x-)
        const double at = static_cast<double>(j) / n;     // F_n(x)
        worst = std::max({worst, std::abs(below - cdf_left(xs[i])), std::abs(at - cdf(xs[i]))});
        i = j;
    }
    return worst;
}

inline double ks_distance(const EmpiricalDist& dist, const Measure& m) {
    return ks_distance(
        dist, [&](double t) { return m.cdf(t); }, [&](double t) { return m.cdf_left(t); });
}

/// KS distance to m conditioned on [lo, hi]; used for samples that were
/// selected by an interval constraint, such as the ratios of P_eps members.
inline double ks_distance_conditioned(const EmpiricalDist& dist, const Measure& m, double lo, double hi) {
    const double base = m.cdf_left(lo);
    const double total = m.mass(lo, hi);
    if (!(total > 0.0)) throw std::domain_error("ks_distance_conditioned: interval has zero mass");
    const auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    return ks_distance(
        dist, [&](double t) { return clamp01((m.cdf(std::min(t, hi)) - base) / total); },
        [&](double t) { return clamp01((m.cdf_left(std::min(t, hi)) - base) / total); });
}

inline nlohmann::json ks_report(const EmpiricalDist& dist, const Measure& m) {
    return {{"n", dist.count}, {"ks", ks_distance(dist, m)}, {"measure_kind", to_string(m.kind())}};
}

struct ErdosTuranBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds() const { return lhs <= rhs; }
};

/// |sum_n e(m a_n)| for m = 1..T. Samples are split into fixed blocks whose
/// partial sums are combined in block order, so the result is the same for
/// any thread count.
inline std::vector<double> exponential_sum_moduli(const std::vector<double>& angles, int T,
                                                  unsigned threads = 1) {
    constexpr std::size_t kBlock = 4096;
    const std::size_t blocks = (angles.size() + kBlock - 1) / kBlock;
    std::vector<std::vector<std::complex<double>>> partial(blocks,
                                                           std::vector<std::complex<double>>(T + 1));
    parallel_for(blocks, threads, [&](std::size_t bi) {
        const std::size_t lo = bi * kBlock, hi = std::min(angles.size(), lo + kBlock);
        for (std::size_t n = lo; n < hi; ++n) {
            // e(m a) for successive m via repeated multiplication by e(a),
            // re-anchored every 16 steps.
            const std::complex<double> step = std::polar(1.0, 2.0 * std::numbers::pi * angles[n]);
            std::complex<double> z = 1.0;
            for (int m = 1; m <= T; ++m) {
                if (m % 16 == 0)
                    z = std::polar(1.0, 2.0 * std::numbers::pi * std::fmod(m * angles[n], 1.0));
                else
                    z *= step;
                partial[bi][m] += z;
            }
        }
    });
    std::vector<double> out(T + 1, 0.0);
    for (int m = 1; m <= T; ++m) {
        std::complex<double> s = 0.0;
        for (std::size_t bi = 0; bi < blocks; ++bi) s += partial[bi][m];
        out[m] = std::abs(s);
    }
    return out;
}

/// Erdos-Turan for a sequence of angles in [0, 1) and a law `measure` on the
/// angle circle (anything with mass(lo, hi)):
///   lhs = |#{n : a_n in [lo, hi]} - mu([lo, hi]) x|
///   rhs = x/T + sum_{1 <= |m| <= T} (1/T + 1/|m|) |sum_n e(m a_n)|
/// Both endpoints are closed.
template <typename AngleMeasure>
ErdosTuranBound erdos_turan_bound(const std::vector<double>& angles, double lo, double hi,
                                  const AngleMeasure& measure, int T, unsigned threads = 1) {
    if (T < 2) throw std::domain_error("erdos_turan_bound: T must be at least 2");
    if (angles.empty()) throw std::domain_error("erdos_turan_bound: empty sequence");
    if (lo < 0.0 || hi > 1.0 || lo > hi) throw std::domain_error("erdos_turan_bound: need 0 <= lo <= hi <= 1");
    const double x = static_cast<double>(angles.size());
    std::size_t inside = 0;
    for (double a : angles) inside += (a >= lo && a <= hi) ? 1 : 0;
    ErdosTuranBound out;
    out.lhs = std::abs(static_cast<double>(inside) - measure.mass(lo, hi) * x);
    const auto sums = exponential_sum_moduli(angles, T, threads);
    double rhs = x / T;
    // |S_{-m}| = |S_m| for real angles, so each m counts twice.
    for (int m = 1; m <= T; ++m) rhs += 2.0 * (1.0 / T + 1.0 / m) * sums[m];
    out.rhs = rhs;
    return out;
}

/// A constrained prime set as a sorted member list up to x plus its density
/// among all primes. `d_E` gates the moduli: only q coprime to d_E are used.
struct BVSetSpec {
    std::vector<u64> members;  ///< ascending
    double density = 1.0;
    u64 d_E = 1;
};

struct BVRow {
    u64 q = 1;
    u64 worst_a = 0;
    u64 worst_y = 0;
    u64 observed = 0;
    double expected = 0.0;
    double abs_err = 0.0;
};

struct BVTable {
    std::vector<BVRow> rows;
    double aggregate = 0.0;             ///< sum over q of the per-q maxima
    double aggregate_normalized = 0.0;  ///< aggregate / (delta pi(x))
};

/// Geometric grid of `points` cutoffs from 2 to x (ends included, deduplicated).
inline std::vector<u64> geometric_grid(u64 x, std::size_t points = 16) {
    std::vector<u64> grid;
    if (x < 2) return grid;
    const double ratio = points > 1 ? std::log(static_cast<double>(x) / 2.0) / (points - 1) : 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        u64 y = i + 1 == points ? x : static_cast<u64>(std::llround(2.0 * std::exp(ratio * i)));
        y = std::clamp<u64>(y, 2, x);
        if (grid.empty() || grid.back() != y) grid.push_back(y);
    }
    return grid;
}

/// For each q <= Q coprime to d_E: max over residues a coprime to q and cutoffs
/// y in the grid of |pi_set(y; q, a) - delta pi(y) / phi(q)|. `primes` must
/// list every prime up to max(y_grid).
inline BVTable bv_table(const BVSetSpec& set, const std::vector<u64>& primes, u64 Q,
                        std::vector<u64> y_grid, unsigned threads = 1) {
    if (y_grid.empty()) throw std::invalid_argument("bv_table: empty cutoff grid");
    std::sort(y_grid.begin(), y_grid.end());
    y_grid.erase(std::unique(y_grid.begin(), y_grid.end()), y_grid.end());
    if (y_grid.front() < 2) throw std::invalid_argument("bv_table: cutoffs must be at least 2");
    if (Q > y_grid.back()) throw std::invalid_argument("bv_table: Q must not exceed x");

    std::vector<u64> pi_at(y_grid.size());
    for (std::size_t k = 0; k < y_grid.size(); ++k)
        pi_at[k] = static_cast<u64>(std::upper_bound(primes.begin(), primes.end(), y_grid[k]) - primes.begin());

    std::vector<u64> moduli;
    for (u64 q = 1; q <= Q; ++q)
        if (std::gcd(q, set.d_E) == 1) moduli.push_back(q);

    std::vector<BVRow> rows(moduli.size());
    parallel_for(moduli.size(), threads, [&](std::size_t idx) {
        const u64 q = moduli[idx];
        const double phi = static_cast<double>(euler_phi(q));
        std::vector<u64> counts(q, 0);
        BVRow best;
        best.q = q;
        best.abs_err = -1.0;
        std::size_t next = 0;
        for (std::size_t k = 0; k < y_grid.size(); ++k) {
            while (next < set.members.size() && set.members[next] <= y_grid[k]) ++counts[set.members[next++] % q];
            const double expected = set.density * static_cast<double>(pi_at[k]) / phi;
            for (u64 a = 0; a < q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                const double err = std::abs(static_cast<double>(counts[a]) - expected);
                if (err > best.abs_err) {
                    best.worst_a = a;
                    best.worst_y = y_grid[k];
                    best.observed = counts[a];
                    best.expected = expected;
                    best.abs_err = err;
                }
            }
        }
        rows[idx] = best;
    });

    BVTable table;
    table.rows = std::move(rows);
    for (const auto& r : table.rows) table.aggregate += r.abs_err;
    const double scale = set.density * static_cast<double>(pi_at.back());
    table.aggregate_normalized = scale > 0.0 ? table.aggregate / scale : 0.0;
    return table;
}

inline void write_bv_csv(std::ostream& os, const BVTable& t) {
    os << "q,worst_a,worst_y,observed,expected,abs_err\n";
    for (const auto& r : t.rows) {
        os << r.q << ',' << r.worst_a << ',' << r.worst_y << ',' << r.observed << ','
           << nlohmann::json(r.expected).dump() << ',' << nlohmann::json(r.abs_err).dump() << '\n';
    }
}

inline nlohmann::json bv_json(const BVTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"q", r.q},
                        {"worst_a", r.worst_a},
                        {"worst_y", r.worst_y},
                        {"observed", r.observed},
                        {"expected", r.expected},
                        {"abs_err", r.abs_err}});
    return rows;
}

}  // namespace hecke
