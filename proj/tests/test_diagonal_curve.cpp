#include <gtest/gtest.h>

#include <cmath>

#include "hecke/diagonal_curve.hpp"
#include "hecke/prime_engine.hpp"
#include "oracles.hpp"

using namespace hecke;

namespace {

const CurveSpec kGenus2 = curve_new(1, -1, -1, 5, 2);  // y^2 = x^5 + 1

std::vector<CurveSpec> corpus() {
    return {curve_new(1, 1, 1, 2, 2), curve_new(1, 1, 1, 3, 3), curve_new(1, 1, 1, 4, 2), kGenus2,
            curve_new(1, 2, 1, 3, 3)};
}

}  // namespace

TEST(CurveNew, DerivedInvariants) {
    EXPECT_EQ(kGenus2.d, 1);
    EXPECT_EQ(kGenus2.M, 10);
    EXPECT_EQ(kGenus2.g, 2);

    const auto conic = curve_new(1, 1, 1, 2, 2);
    EXPECT_EQ(conic.d, 2);
    EXPECT_EQ(conic.M, 2);
    EXPECT_EQ(conic.g, 0);

    const auto fermat3 = curve_new(1, 1, 1, 3, 3);
    EXPECT_EQ(fermat3.d, 3);
    EXPECT_EQ(fermat3.M, 3);
    EXPECT_EQ(fermat3.g, 1);
    for (const auto& c : corpus()) EXPECT_EQ(c.d * c.M, c.alpha * c.beta);
}

TEST(CurveNew, RejectsBadSpecs) {
    EXPECT_THROW(curve_new(0, 1, 1, 3, 2), CurveError);
    EXPECT_THROW(curve_new(1, 1, 1, 2, 3), CurveError);
    EXPECT_THROW(curve_new(1, 1, 1, 17, 2), CurveError);
    // Genus parity holds for every exponent pair in range.
    for (i64 al = 2; al <= 16; ++al)
        for (i64 be = 2; be <= al; ++be) EXPECT_NO_THROW(curve_new(1, 1, 1, al, be)) << al << ',' << be;
    EXPECT_THROW(parse_curve("1,2,3"), CurveError);
    EXPECT_THROW(parse_curve("1,x,1,3,3"), CurveError);
    EXPECT_EQ(parse_curve("1,-1,-1,5,2"), kGenus2);
}

TEST(Nd, ResidueTest) {
    for (u64 p : primes_up_to(2000)) {
        if (p % 10 == 1) {
            EXPECT_EQ(nd(kGenus2, p), 1) << p;
        }
    }
    const auto c = curve_new(1, 1, 1, 4, 2);
    EXPECT_EQ(nd(c, 13), 2);
    EXPECT_THROW(nd(c, 7), CurveError);
    EXPECT_THROW(nd(curve_new(3, 1, 1, 3, 3), 3), CurveError);
}

TEST(CountAffine, BruteForceExamples) {
    EXPECT_EQ(count_affine_naive(kGenus2, 11), 7);
    EXPECT_EQ(oracle::curve_points(1, -1, -1, 5, 2, 11), 7);
    EXPECT_EQ(count_affine_naive(curve_new(1, 1, 1, 2, 2), 5), 4);
    EXPECT_EQ(count_affine_naive(curve_new(1, 1, 1, 2, 2), 3), 4);
    EXPECT_EQ(count_affine_charsum(kGenus2, 11), 7);
    EXPECT_EQ(count_affine_charsum(curve_new(1, 1, 1, 2, 2), 13), 12);
    EXPECT_EQ(oracle::curve_points(1, 1, 1, 2, 2, 13), 12);
    // Six affine points; nine once the three points at infinity are added.
    EXPECT_EQ(count_affine_charsum(curve_new(1, 1, 1, 3, 3), 7), 6);
    EXPECT_EQ(oracle::curve_points(1, 1, 1, 3, 3, 7), 6);
}

TEST(CountAffine, CharsumRejectsUnsupportedPrimes) {
    EXPECT_THROW(count_affine_charsum(kGenus2, 7), UnsupportedPrime);
    EXPECT_THROW(count_affine_charsum(curve_new(5, 1, 1, 3, 3), 5), CurveError);
    // count_affine falls back to the naive route.
    EXPECT_EQ(count_affine(kGenus2, 7), count_affine_naive(kGenus2, 7));
}

TEST(CountAffine, BackendsAgreeWithBruteForceOnSmallPrimes) {
    for (const auto& c : corpus()) {
        for (u64 p : primes_up_to(200)) {
            if (divides_abc(c, p)) continue;
            const auto brute = oracle::curve_points(c.a, c.b, c.c, static_cast<int>(c.alpha),
                                                    static_cast<int>(c.beta), static_cast<i64>(p));
            ASSERT_EQ(count_affine_naive(c, p), brute) << c.key() << " p=" << p;
            if (p % static_cast<u64>(c.M) == 1) {
                ASSERT_EQ(count_affine_charsum(c, p), brute) << c.key() << " p=" << p;
            }
        }
    }
}

TEST(Trace, KnownValues) {
    const auto r = trace(kGenus2, 11);
    EXPECT_EQ(r.nd, 1);
    EXPECT_EQ(r.affine_count, 7);
    EXPECT_EQ(r.trace, 4);
    EXPECT_NEAR(r.normalized, 4.0 / (4.0 * std::sqrt(11.0)), 1e-15);
    EXPECT_NEAR(r.normalized, 0.3015, 1e-4);

    const auto f = trace(curve_new(1, 1, 1, 3, 3), 7);
    EXPECT_EQ(f.nd, 3);
    EXPECT_EQ(f.trace, -1);
    EXPECT_LE(std::abs(f.trace), 2.0 * std::sqrt(7.0));

    EXPECT_EQ(make_trace_record(kGenus2, 11, 1, 11).trace, 0);
}

TEST(Trace, HasseBoundAndIntegrality) {
    for (u64 p : primes_up_to(20000)) {
        if (!is_good_prime(kGenus2, p)) continue;
        const auto r = trace(kGenus2, p);
        ASSERT_TRUE(within_hasse(kGenus2, r)) << p;
        ASSERT_TRUE(r.nd == 0 || r.nd == kGenus2.d);
    }
    const auto c = curve_new(1, 1, 1, 4, 2);
    for (u64 p : primes_up_to(5000)) {
        if (!is_good_prime(c, p)) continue;
        const auto r = trace(c, p);
        ASSERT_TRUE(r.nd == 0 || r.nd == 2);
        ASSERT_TRUE(within_hasse(c, r)) << p;
    }
}

TEST(InPCI, Membership) {
    EXPECT_TRUE(in_P_CI(kGenus2, 11, -1.0, 1.0));
    EXPECT_FALSE(in_P_CI(kGenus2, 7, -1.0, 1.0));
    const auto [lo, hi] = eps_interval(kGenus2, 0.5);
    EXPECT_DOUBLE_EQ(hi, 0.125);
    EXPECT_FALSE(in_P_CI(kGenus2, 11, lo, hi));
    EXPECT_FALSE(in_P_CI(curve_new(1, 1, 1, 2, 2), 5, -1.0, 1.0));  // genus 0
    EXPECT_FALSE(in_P_CI(kGenus2, 21, -1.0, 1.0));                  // not prime
}
