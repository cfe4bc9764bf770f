#pragma once

// Constrained prime sets and the desk-scale cluster/gap scans over them.

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hecke/arith.hpp"
#include "hecke/diagonal_curve.hpp"
#include "hecke/gaussian_split.hpp"
#include "hecke/parallel.hpp"
#include "hecke/prime_engine.hpp"
#include "hecke/trace_cache.hpp"
#include "hecke/tuples.hpp"

namespace hecke {

/// A set of primes given by a membership predicate. Implementations must be
/// safe to query from several threads at once.
class PrimeSet {
public:
    virtual ~PrimeSet() = default;
    virtual std::string label() const = 0;
    virtual bool contains(u64 n) const = 0;

    /// Members in [lo, hi], ascending. The default filters the primes of the range.
    virtual std::vector<u64> members(u64 lo, u64 hi, unsigned threads = 1) const {
        lo = std::max<u64>(lo, 2);
        if (lo > hi) return {};
        const auto primes = sieve_range(lo, hi + 1, threads).primes;
        std::vector<char> keep(primes.size(), 0);
        parallel_for(primes.size(), threads, [&](std::size_t i) { keep[i] = accepts_prime(primes[i]); });
        std::vector<u64> out;
        for (std::size_t i = 0; i < primes.size(); ++i)
            if (keep[i]) out.push_back(primes[i]);
        return out;
    }

protected:
    /// Predicate restricted to values already known to be prime.
    virtual bool accepts_prime(u64 p) const { return contains(p); }
};

class AllPrimes final : public PrimeSet {
public:
    std::string label() const override { return "all primes"; }
    bool contains(u64 n) const override { return is_prime(n); }

protected:
    bool accepts_prime(u64) const override { return true; }
};

/// Primes p = r mod m.
class PrimesInClass final : public PrimeSet {
public:
    PrimesInClass(u64 residue, u64 modulus) : r_(residue % modulus), m_(modulus) {
        if (modulus == 0) throw std::invalid_argument("PrimesInClass: modulus must be positive");
    }
    std::string label() const override {
        return "primes = " + std::to_string(r_) + " mod " + std::to_string(m_);
    }
    bool contains(u64 n) const override { return n % m_ == r_ && is_prime(n); }

protected:
    bool accepts_prime(u64 p) const override { return p % m_ == r_; }

private:
    u64 r_, m_;
};

/// P_eps = { p = a^2 + b^2 : |a| <= eps sqrt(p) } with the primary normal form.
class PEpsSet final : public PrimeSet {
public:
    explicit PEpsSet(double eps) : eps_(eps) {
        if (!(eps > 0.0) || eps > 1.0) throw std::domain_error("PEpsSet: eps must lie in (0, 1]");
    }
    std::string label() const override {
        std::ostringstream os;
        os << "P_eps(eps=" << eps_ << ")";
        return os.str();
    }
    bool contains(u64 n) const override { return is_prime(n) && accepts_prime(n); }
    double eps() const { return eps_; }

protected:
    bool accepts_prime(u64 p) const override {
        const auto s = canonical_split(p);
        return s && within_eps(*s, eps_);
    }

private:
    double eps_;
};

/// P_{C,I}: primes p = 1 mod M, p not dividing abc, with normalized trace in
/// [lo, hi]. Traces come from a shared TraceCache when one is supplied; misses
/// are computed and recorded in the cache.
class CurveTraceSet final : public PrimeSet {
public:
    CurveTraceSet(CurveSpec curve, double lo, double hi, std::shared_ptr<TraceCache> cache = nullptr)
        : curve_(std::move(curve)), lo_(lo), hi_(hi), cache_(std::move(cache)) {
        if (curve_.g < 1) throw CurveError("CurveTraceSet: genus must be positive");
        if (lo > hi || lo < -1.0 || hi > 1.0) throw std::domain_error("CurveTraceSet: bad interval");
        if (cache_ && !(cache_->curve() == curve_))
            throw CacheError("CurveTraceSet: cache belongs to a different curve");
    }
    std::string label() const override {
        std::ostringstream os;
        os << "P_C,I(curve=" << curve_.key() << ", I=[" << lo_ << "," << hi_ << "])";
        return os.str();
    }
    bool contains(u64 n) const override { return is_prime(n) && accepts_prime(n); }

    std::vector<u64> members(u64 lo, u64 hi, unsigned threads = 1) const override {
        lo = std::max<u64>(lo, 2);
        if (lo > hi) return {};
        std::vector<u64> good;
        for (u64 p : sieve_range(lo, hi + 1, threads).primes)
            if (is_good_prime(curve_, p)) good.push_back(p);
        std::vector<TraceRecord> recs(good.size());
        std::vector<char> known(good.size(), 0);
        if (cache_) {
            std::lock_guard lock(mutex_);
            for (std::size_t i = 0; i < good.size(); ++i)
                if (const auto* r = cache_->find(good[i])) {
                    recs[i] = *r;
                    known[i] = 1;
                }
        }
        parallel_for(good.size(), threads, [&](std::size_t i) {
            if (!known[i]) recs[i] = trace(curve_, good[i]);
        });
        std::vector<u64> out;
        {
            std::lock_guard lock(mutex_);
            for (std::size_t i = 0; i < good.size(); ++i) {
                if (!known[i]) {
                    ++misses_;
                    if (cache_) cache_->insert(recs[i]);
                }
                if (normalized_in(recs[i], lo_, hi_)) out.push_back(good[i]);
            }
        }
        return out;
    }

    std::size_t misses() const {
        std::lock_guard lock(mutex_);
        return misses_;
    }

protected:
    bool accepts_prime(u64 p) const override {
        if (!is_good_prime(curve_, p)) return false;
        if (cache_) {
            std::lock_guard lock(mutex_);
            if (const auto* r = cache_->find(p)) return normalized_in(*r, lo_, hi_);
        }
        const auto rec = trace(curve_, p);
        std::lock_guard lock(mutex_);
        ++misses_;
        if (cache_) cache_->insert(rec);
        return normalized_in(rec, lo_, hi_);
    }

private:
    CurveSpec curve_;
    double lo_, hi_;
    std::shared_ptr<TraceCache> cache_;
    mutable std::mutex mutex_;
    mutable std::size_t misses_ = 0;
};

struct Window {
    u64 n = 0;
    std::vector<i64> hit_offsets;
};

struct GapRecord {
    u64 gap = 0;
    u64 p = 0;
    u64 q = 0;
    bool operator==(const GapRecord&) const = default;
};

struct ScanReport {
    std::string set_label;
    AdmissibleTuple tuple;
    u64 x = 0;                          ///< windows n in (x, 2x]
    std::vector<u64> histogram;         ///< histogram[h] = #windows with h hits
    std::size_t max_hits = 0;
    std::size_t best_window_count = 0;  ///< windows attaining max_hits (uncapped)
    std::vector<Window> best_windows;   ///< earliest windows attaining max_hits
    u64 min_gap = 0;                    ///< 0 when fewer than two members in (x, 2x]
    std::vector<std::pair<u64, u64>> record_pairs;
};

inline constexpr std::size_t kMaxReportedWindows = 64;

/// For each n in (x, 2x] counts how many of n + h_i belong to the set. Members
/// are precomputed once for the covered range and every reported hit is
/// re-verified with the set's own predicate.
inline ScanReport scan_tuple(const PrimeSet& set, const AdmissibleTuple& H, u64 x, unsigned threads = 1) {
    if (H.offsets.empty()) throw std::domain_error("scan_tuple: empty tuple");
    if (!is_admissible(H.offsets).admissible) throw std::domain_error("scan_tuple: tuple is not admissible");
    if (x < 1) throw std::domain_error("scan_tuple: x must be positive");
    const i64 hmin = H.offsets.front(), hmax = H.offsets.back();
    const i64 lo_signed = static_cast<i64>(x) + 1 + hmin;
    const u64 lo = static_cast<u64>(std::max<i64>(lo_signed, 0));
    const u64 hi = 2 * x + static_cast<u64>(std::max<i64>(hmax, 0));
    std::vector<char> member(hi - lo + 1, 0);
    for (u64 m : set.members(lo, hi, threads)) member[m - lo] = 1;
    const auto is_member = [&](i64 v) {
        return v >= static_cast<i64>(lo) && v <= static_cast<i64>(hi) && member[static_cast<u64>(v) - lo];
    };

    const std::size_t k = H.offsets.size();
    constexpr u64 kBlock = u64{1} << 16;
    const u64 blocks = (x + kBlock - 1) / kBlock;
    struct Partial {
        std::vector<u64> hist;
        std::size_t best = 0;
        std::size_t best_count = 0;
        std::vector<u64> best_n;
    };
    std::vector<Partial> parts(blocks);
    parallel_for(blocks, threads, [&](std::size_t bi) {
        Partial& part = parts[bi];
        part.hist.assign(k + 1, 0);
        const u64 n0 = x + 1 + bi * kBlock, n1 = std::min(2 * x, n0 + kBlock - 1);
        for (u64 n = n0; n <= n1; ++n) {
            std::size_t hits = 0;
            for (i64 h : H.offsets) hits += is_member(static_cast<i64>(n) + h);
            ++part.hist[hits];
            if (hits > part.best) {
                part.best = hits;
                part.best_count = 0;
                part.best_n.clear();
            }
            if (hits == part.best) {
                ++part.best_count;
                if (part.best_n.size() < kMaxReportedWindows) part.best_n.push_back(n);
            }
        }
    });

    ScanReport rep;
    rep.set_label = set.label();
    rep.tuple = H;
    rep.x = x;
    rep.histogram.assign(k + 1, 0);
    for (const auto& part : parts) {
        for (std::size_t h = 0; h <= k; ++h) rep.histogram[h] += part.hist[h];
        rep.max_hits = std::max(rep.max_hits, part.best);
    }
    for (const auto& part : parts) {
        if (part.best != rep.max_hits) continue;
        rep.best_window_count += part.best_count;
        for (u64 n : part.best_n) {
            if (rep.best_windows.size() >= kMaxReportedWindows) break;
            Window w{n, {}};
            for (i64 h : H.offsets) {
                if (!is_member(static_cast<i64>(n) + h)) continue;
                if (!set.contains(static_cast<u64>(static_cast<i64>(n) + h)))
                    throw std::logic_error("scan_tuple: hit failed re-verification");
                w.hit_offsets.push_back(h);
            }
            rep.best_windows.push_back(std::move(w));
        }
    }
    if (rep.max_hits == 0) {
        rep.best_windows.clear();
        rep.best_window_count = 0;
    }

    std::vector<u64> inside;
    for (u64 n = x + 1; n <= 2 * x; ++n)
        if (is_member(static_cast<i64>(n))) inside.push_back(n);
    for (std::size_t i = 1; i < inside.size(); ++i) {
        const u64 gap = inside[i] - inside[i - 1];
        if (rep.min_gap == 0 || gap < rep.min_gap) {
            rep.min_gap = gap;
            rep.record_pairs.clear();
        }
        if (gap == rep.min_gap && rep.record_pairs.size() < kMaxReportedWindows)
            rep.record_pairs.emplace_back(inside[i - 1], inside[i]);
    }
    return rep;
}

/// The `limit` smallest gaps between consecutive members p < q <= x, ordered by
/// gap and then by p. Empty when the set has fewer than two members.
inline std::vector<GapRecord> record_gaps(const PrimeSet& set, u64 x, std::size_t limit = 10,
                                          unsigned threads = 1) {
    const auto m = set.members(2, x, threads);
    std::vector<GapRecord> gaps;
    for (std::size_t i = 1; i < m.size(); ++i) gaps.push_back({m[i] - m[i - 1], m[i - 1], m[i]});
    const std::size_t keep = std::min(limit, gaps.size());
    std::partial_sort(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(keep), gaps.end(),
                      [](const GapRecord& a, const GapRecord& b) {
                          return a.gap != b.gap ? a.gap < b.gap : a.p < b.p;
                      });
    gaps.resize(keep);
    return gaps;
}

inline nlohmann::json scan_json(const ScanReport& r) {
    nlohmann::json hist = nlohmann::json::object();
    for (std::size_t h = 0; h < r.histogram.size(); ++h) hist[std::to_string(h)] = r.histogram[h];
    nlohmann::json windows = nlohmann::json::array();
    for (const auto& w : r.best_windows) windows.push_back({{"n", w.n}, {"hit_offsets", w.hit_offsets}});
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [p, q] : r.record_pairs) pairs.push_back({p, q});
    return {{"set_label", r.set_label},
            {"tuple", r.tuple.offsets},
            {"diameter", r.tuple.diameter()},
            {"range", {r.x, 2 * r.x}},
            {"histogram", hist},
            {"max_hits", r.max_hits},
            {"best_window_count", r.best_window_count},
            {"best_windows", windows},
            {"min_gap", r.min_gap},
            {"record_pairs", pairs}};
}

inline void write_windows_csv(std::ostream& os, const ScanReport& r) {
    os << "n,hits,offsets\n";
    for (const auto& w : r.best_windows)
        os << w.n << ',' << w.hit_offsets.size() << ",\"" << format_tuple(w.hit_offsets) << "\"\n";
}

}  // namespace hecke
