#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hecke/gaussian_split.hpp"
#include "hecke/prime_engine.hpp"
#include "oracles.hpp"

using namespace hecke;

TEST(Cornacchia, KnownValues) {
    EXPECT_EQ(cornacchia(5, 1), (std::pair<u64, u64>{1, 2}));
    EXPECT_EQ(cornacchia(13, 1), (std::pair<u64, u64>{3, 2}));
    EXPECT_FALSE(cornacchia(7, 1).has_value());
    EXPECT_EQ(cornacchia(29, 7), (std::pair<u64, u64>{1, 2}));
}

TEST(Cornacchia, SmallPrimesAndRangeErrors) {
    EXPECT_EQ(cornacchia(2, 1), (std::pair<u64, u64>{1, 1}));
    EXPECT_EQ(cornacchia(11, 2), (std::pair<u64, u64>{3, 1}));
    EXPECT_FALSE(cornacchia(7, 7).has_value());  // 0^2 + 7 * 1^2 needs a = 0
    EXPECT_EQ(cornacchia(7, 3), (std::pair<u64, u64>{2, 1}));
    EXPECT_THROW(cornacchia(5, 0), std::domain_error);
    EXPECT_THROW(cornacchia(5, 164), std::domain_error);
}

TEST(Cornacchia, MatchesExhaustiveSearchForClassNumberOneFields) {
    for (u64 D : kClassNumberOneD) {
        for (u64 p : primes_up_to(3000)) {
            bool exists = false;
            for (u64 b = 1; D * b * b < p && !exists; ++b) exists = is_square(p - D * b * b);
            const auto got = cornacchia(p, D);
            ASSERT_EQ(got.has_value(), exists) << "p=" << p << " D=" << D;
            if (got) {
                EXPECT_EQ(got->first * got->first + D * got->second * got->second, p);
                EXPECT_GT(got->first, 0u);
                EXPECT_GT(got->second, 0u);
            }
        }
    }
}

TEST(CanonicalSplit, KnownValues) {
    const auto s5 = canonical_split(5);
    ASSERT_TRUE(s5);
    EXPECT_EQ(s5->a, 1);
    EXPECT_EQ(s5->b, 2);
    EXPECT_NEAR(s5->ratio, 0.4472135955, 1e-9);

    const auto s13 = canonical_split(13);
    ASSERT_TRUE(s13);
    EXPECT_EQ(s13->a, -3);
    EXPECT_EQ(s13->b, 2);
    EXPECT_NEAR(s13->ratio, -0.8320502943, 1e-9);

    EXPECT_FALSE(canonical_split(3));
    EXPECT_FALSE(canonical_split(2));
}

TEST(CanonicalSplit, Sign13FromAllFourChoices) {
    // Of the decompositions of 13 with a odd and b > 0, only a = 1 mod 4 survives.
    std::vector<std::pair<i64, i64>> candidates;
    for (auto [a, b] : oracle::two_square_reps(13))
        if (a % 2 != 0 && b > 0 && ((a % 4) + 4) % 4 == 1) candidates.emplace_back(a, b);
    ASSERT_EQ(candidates.size(), 1u);
    EXPECT_EQ(candidates[0], (std::pair<i64, i64>{-3, 2}));
}

TEST(CanonicalSplit, ValidAndStableUpToMillion) {
    for (u64 p : primes_up_to(1000000)) {
        if (p % 4 != 1) continue;
        const auto s = canonical_split(p);
        ASSERT_TRUE(s) << p;
        ASSERT_EQ(s->a * s->a + s->b * s->b, static_cast<i64>(p));
        ASSERT_EQ(mod_floor(s->a, 4), 1u);
        ASSERT_GT(s->b, 0);
        const auto again = normalize_split(p, s->a, s->b);
        ASSERT_EQ(again.a, s->a);
        ASSERT_EQ(again.b, s->b);
    }
}

TEST(CanonicalSplit, UniqueAmongAllRepresentations) {
    std::mt19937_64 rng(7);
    const auto primes = primes_up_to(100000);
    std::vector<u64> split;
    for (u64 p : primes)
        if (p % 4 == 1) split.push_back(p);
    std::uniform_int_distribution<std::size_t> pick(0, split.size() - 1);
    for (int i = 0; i < 100; ++i) {
        const u64 p = split[pick(rng)];
        int canonical = 0;
        for (auto [a, b] : oracle::two_square_reps(static_cast<i64>(p)))
            if (a % 2 != 0 && b > 0 && ((a % 4) + 4) % 4 == 1) ++canonical;
        EXPECT_EQ(canonical, 1) << p;
        for (auto [a, b] : oracle::two_square_reps(static_cast<i64>(p))) {
            const auto n = normalize_split(p, a, b);
            EXPECT_EQ(n.a, canonical_split(p)->a);
            EXPECT_EQ(n.b, canonical_split(p)->b);
        }
    }
}

TEST(CanonicalSplit, RatioSignBalanced) {
    std::size_t n = 0, positive = 0;
    for (u64 p : primes_up_to(1000000)) {
        if (const auto s = canonical_split(p)) {
            ++n;
            positive += s->a > 0;
        }
    }
    EXPECT_LE(std::abs(static_cast<double>(positive) - n / 2.0), 4.0 * std::sqrt(static_cast<double>(n)));
}

TEST(HeckeAngle, DirectEvaluation) {
    EXPECT_NEAR(hecke_angle(1, 2), 0.7048327646991335, 1e-12);
    EXPECT_DOUBLE_EQ(hecke_angle(1, 0), 0.0);
    EXPECT_NEAR(hecke_angle(-3, 2), 0.6256659163780025, 1e-12);
    const auto s = *canonical_split(5);
    EXPECT_NEAR(hecke_angle(s), 0.7048327646991335, 1e-12);
    SplitPrime other = s;
    other.D = 2;
    EXPECT_THROW(hecke_angle(other), std::domain_error);
}

TEST(PEps, KnownValues) {
    EXPECT_TRUE(in_P_eps(5, 0.5));
    EXPECT_FALSE(in_P_eps(5, 0.4));
    EXPECT_FALSE(in_P_eps(7, 0.5));
    EXPECT_THROW(in_P_eps(5, 0.0), std::domain_error);
}

TEST(PEps, FullIntervalContainsEverySplitPrime) {
    for (u64 p : primes_up_to(200000)) {
        if (p % 4 == 1) {
            ASSERT_TRUE(in_P_eps(p, 1.0)) << p;
        }
    }
}
