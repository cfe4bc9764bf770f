#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "hecke/gap_search.hpp"
#include "oracles.hpp"

using namespace hecke;

TEST(PrimeSets, PEpsMembersBelowHundred) {
    const PEpsSet set(0.95);
    EXPECT_EQ(set.members(2, 100), (std::vector<u64>{5, 13, 17, 29, 37, 41, 61, 73, 89, 97}));
    for (u64 n = 0; n < 100; ++n) {
        const auto m = set.members(2, 100);
        EXPECT_EQ(set.contains(n), std::binary_search(m.begin(), m.end(), n)) << n;
    }
}

TEST(PrimeSets, ClassAndCurveSets) {
    const PrimesInClass ones(1, 4);
    for (u64 p : ones.members(2, 1000)) EXPECT_EQ(p % 4, 1u);
    EXPECT_THROW(PrimesInClass(1, 0), std::invalid_argument);

    const auto curve = curve_new(1, -1, -1, 5, 2);
    auto cache = std::make_shared<TraceCache>(curve);
    const CurveTraceSet set(curve, -1.0, 1.0, cache);
    const auto m = set.members(2, 2000, 2);
    for (u64 p : primes_up_to(2000)) EXPECT_EQ(std::binary_search(m.begin(), m.end(), p), is_good_prime(curve, p));
    const auto misses = set.misses();
    EXPECT_EQ(set.members(2, 2000, 2), m);
    EXPECT_EQ(set.misses(), misses);  // second pass served from the cache
    EXPECT_THROW(CurveTraceSet(curve_new(1, 1, 1, 2, 2), -1, 1), CurveError);
}

TEST(RecordGaps, PEpsSmallestGap) {
    const auto g = record_gaps(PEpsSet(0.95), 100);
    ASSERT_FALSE(g.empty());
    EXPECT_EQ(g[0], (GapRecord{4, 13, 17}));
    EXPECT_TRUE(record_gaps(PEpsSet(0.95), 5).empty());
}

TEST(RecordGaps, MatchesBruteForceAndStableUnderDoubling) {
    const u64 x = 50000;
    const PEpsSet set(0.3);
    const auto members = set.members(2, 2 * x);
    const auto brute = [&](u64 lim) {
        std::vector<GapRecord> all;
        for (std::size_t i = 1; i < members.size() && members[i] <= lim; ++i)
            all.push_back({members[i] - members[i - 1], members[i - 1], members[i]});
        std::sort(all.begin(), all.end(),
                  [](const GapRecord& a, const GapRecord& b) { return a.gap != b.gap ? a.gap < b.gap : a.p < b.p; });
        all.resize(std::min<std::size_t>(all.size(), 10));
        return all;
    };
    const auto at_x = record_gaps(set, x, 10, 2);
    EXPECT_EQ(at_x, brute(x));
    const auto at_2x = record_gaps(set, 2 * x);
    EXPECT_EQ(at_2x, brute(2 * x));
    EXPECT_LE(at_2x.front().gap, at_x.front().gap);
    // A record at x below the largest gap kept at 2x must still be listed there.
    for (const auto& r : at_x)
        if (r.gap < at_2x.back().gap) EXPECT_NE(std::find(at_2x.begin(), at_2x.end(), r), at_2x.end());
}

TEST(ScanTuple, TwinPrimesMatchTrialDivision) {
    const u64 x = 20000;
    const auto rep = scan_tuple(AllPrimes(), make_tuple({0, 2}), x, 2);
    u64 twins = 0;
    for (u64 n = x + 1; n <= 2 * x; ++n) twins += oracle::trial_division_prime(n) && oracle::trial_division_prime(n + 2);
    ASSERT_EQ(rep.histogram.size(), 3u);
    EXPECT_EQ(rep.histogram[2], twins);
    EXPECT_EQ(rep.max_hits, 2u);
    EXPECT_EQ(rep.best_window_count, twins);
    EXPECT_EQ(rep.histogram[0] + rep.histogram[1] + rep.histogram[2], x);
    EXPECT_EQ(rep.min_gap, 2u);
    for (const auto& w : rep.best_windows) {
        EXPECT_TRUE(oracle::trial_division_prime(w.n));
        EXPECT_TRUE(oracle::trial_division_prime(w.n + 2));
    }
}

TEST(ScanTuple, SingletonCountsPrimesInDyadicRange) {
    for (u64 x : {1000u, 77777u}) {
        const auto rep = scan_tuple(AllPrimes(), make_tuple({0}), x);
        EXPECT_EQ(rep.histogram[1], prime_count(2 * x) - prime_count(x)) << x;
    }
}

TEST(ScanTuple, ThreadCountDoesNotChangeReport) {
    const PEpsSet set(0.5);
    const auto H = narrow_tuple(5);
    const auto a = scan_tuple(set, H, 300000, 1);
    const auto b = scan_tuple(set, H, 300000, 3);
    EXPECT_EQ(scan_json(a), scan_json(b));
    EXPECT_LE(a.best_windows.size(), kMaxReportedWindows);
}

TEST(ScanTuple, RejectsBadInput) {
    EXPECT_THROW(scan_tuple(AllPrimes(), AdmissibleTuple{{0, 1}, std::nullopt}, 100), std::domain_error);
    EXPECT_THROW(scan_tuple(AllPrimes(), make_tuple({0, 2}), 0), std::domain_error);
}

TEST(ScanTuple, WindowsCsv) {
    const auto rep = scan_tuple(AllPrimes(), make_tuple({0, 2, 6}), 1000);
    std::ostringstream os;
    write_windows_csv(os, rep);
    EXPECT_EQ(os.str().rfind("n,hits,offsets\n", 0), 0u);
    EXPECT_EQ(rep.max_hits, 3u);
    EXPECT_NE(os.str().find(",3,\"0,2,6\""), std::string::npos);
}
