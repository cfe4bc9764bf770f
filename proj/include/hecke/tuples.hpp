#pragma once

// Admissible k-tuples: verification and a small-diameter construction.

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hecke/arith.hpp"
#include "hecke/prime_engine.hpp"

namespace hecke {

struct AdmissibleTuple {
    std::vector<i64> offsets;  ///< strictly increasing
    std::optional<u64> witness;

    std::size_t k() const { return offsets.size(); }
    i64 diameter() const { return offsets.empty() ? 0 : offsets.back() - offsets.front(); }
    bool admissible() const { return !witness.has_value(); }
};

struct AdmissibilityResult {
    bool admissible = true;
    std::optional<u64> witness;  ///< smallest prime whose residues are all covered
};

/// Only primes p <= k can have every class mod p hit by k offsets, so those
/// are the only ones checked.
inline AdmissibilityResult is_admissible(std::vector<i64> offsets) {
    if (offsets.empty()) throw std::domain_error("is_admissible: empty tuple");
    std::sort(offsets.begin(), offsets.end());
    if (std::adjacent_find(offsets.begin(), offsets.end()) != offsets.end())
        throw std::domain_error("is_admissible: duplicate offsets");
    const u64 k = offsets.size();
    std::vector<char> hit;
    for (u64 p : small_primes(k)) {
        hit.assign(p, 0);
        u64 covered = 0;
        for (i64 h : offsets) {
            const u64 r = mod_floor(h, p);
            if (!hit[r]) {
                hit[r] = 1;
                if (++covered == p) break;
            }
        }
        if (covered == p) return {false, p};
    }
    return {true, std::nullopt};
}

inline AdmissibleTuple make_tuple(std::vector<i64> offsets) {
    std::sort(offsets.begin(), offsets.end());
    const auto res = is_admissible(offsets);
    return {std::move(offsets), res.witness};
}

/// The k consecutive primes after k, shifted to start at 0.
inline std::vector<i64> primes_past_k_tuple(std::size_t k) {
    std::vector<i64> out;
    out.reserve(k);
    u64 n = k + 1;
    while (out.size() < k) {
        if (is_prime(n)) out.push_back(static_cast<i64>(n));
        ++n;
    }
    const i64 base = out.front();
    for (auto& h : out) h -= base;
    return out;
}

namespace detail {

/// Sieve [0, length] by removing, for each prime p <= k in turn, the residue
/// class mod p holding the fewest survivors (smallest residue on ties). The
/// survivors are admissible. Returns the k consecutive survivors of least
/// diameter, or nothing if fewer than k survive.
inline std::optional<std::vector<i64>> greedy_sieve_tuple(std::size_t k, i64 length) {
    std::vector<char> alive(static_cast<std::size_t>(length) + 1, 1);
    std::vector<std::size_t> counts;
    for (u64 p : small_primes(k)) {
        counts.assign(p, 0);
        for (i64 n = 0; n <= length; ++n)
            if (alive[n]) ++counts[static_cast<u64>(n) % p];
        const u64 drop = static_cast<u64>(std::min_element(counts.begin(), counts.end()) - counts.begin());
        for (i64 n = static_cast<i64>(drop); n <= length; n += static_cast<i64>(p)) alive[n] = 0;
    }
    std::vector<i64> survivors;
    for (i64 n = 0; n <= length; ++n)
        if (alive[n]) survivors.push_back(n);
    if (survivors.size() < k) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t i = 1; i + k <= survivors.size(); ++i)
        if (survivors[i + k - 1] - survivors[i] < survivors[best + k - 1] - survivors[best]) best = i;
    std::vector<i64> out(survivors.begin() + best, survivors.begin() + best + k);
    const i64 base = out.front();
    for (auto& h : out) h -= base;
    return out;
}

/// First-improvement local search: replace the largest offset with the
/// smallest interior integer that keeps the tuple admissible, renormalize so
/// it starts at 0, and repeat until no move helps.
inline void narrow_locally(std::vector<i64>& h) {
    bool improved = true;
    while (improved && h.size() >= 2) {
        improved = false;
        const i64 top = h.back();
        std::vector<i64> trial(h.begin(), h.end() - 1);
        for (i64 m = 1; m < top; ++m) {
            if (std::binary_search(trial.begin(), trial.end(), m)) continue;
            auto cand = trial;
            cand.insert(std::upper_bound(cand.begin(), cand.end(), m), m);
            if (is_admissible(cand).admissible) {
                h = std::move(cand);
                improved = true;
                break;
            }
        }
        // Dropping h_1 and adding a value below the new maximum can also help.
        if (!improved && h.size() >= 3) {
            std::vector<i64> tail(h.begin() + 1, h.end());
            for (i64 m = tail.front() + 1; m < tail.back(); ++m) {
                if (std::binary_search(tail.begin(), tail.end(), m)) continue;
                auto cand = tail;
                cand.insert(std::upper_bound(cand.begin(), cand.end(), m), m);
                if (is_admissible(cand).admissible) {
                    h = std::move(cand);
                    improved = true;
                    break;
                }
            }
        }
        const i64 base = h.front();
        for (auto& x : h) x -= base;
    }
}

}  // namespace detail

/// Local search only runs up to this k; beyond it the greedy sieve result is final.
inline constexpr std::size_t kLocalNarrowingMaxK = 128;

/// An admissible k-tuple of small diameter, never wider than the
/// primes-past-k baseline. Deterministic.
inline AdmissibleTuple narrow_tuple(std::size_t k) {
    if (k < 1 || k > 10000) throw std::domain_error("narrow_tuple: k must lie in [1, 10^4]");
    if (k == 1) return make_tuple({0});
    std::vector<i64> best = primes_past_k_tuple(k);
    i64 length = best.back();
    for (int round = 0; round < 8; ++round) {
        auto cand = detail::greedy_sieve_tuple(k, length);
        if (!cand || cand->back() >= best.back()) break;
        best = std::move(*cand);
        length = best.back();
    }
    if (k <= kLocalNarrowingMaxK) detail::narrow_locally(best);
    auto t = make_tuple(std::move(best));
    if (!t.admissible()) throw std::logic_error("narrow_tuple: construction produced an inadmissible tuple");
    return t;
}

inline std::string format_tuple(const std::vector<i64>& offsets) {
    std::ostringstream os;
    for (std::size_t i = 0; i < offsets.size(); ++i) os << (i ? "," : "") << offsets[i];
    return os.str();
}

inline std::vector<i64> parse_tuple(const std::string& text) {
    std::vector<i64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        i64 v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("tuple: cannot parse '" + item + "'");
        }
        if (used != item.size()) throw std::invalid_argument("tuple: cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("tuple: empty offset list");
    return out;
}

}  // namespace hecke
