#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hecke/equidist_stats.hpp"
#include "hecke/gaussian_split.hpp"
#include "hecke/prime_engine.hpp"

using namespace hecke;

TEST(KsDistance, ArcsineQuantilesAreClose) {
    const auto m = Measure::arcsine();
    std::vector<double> s;
    const int n = 1000;
    for (int i = 0; i < n; ++i) s.push_back(m.quantile((i + 0.5) / n));
    EXPECT_LE(ks_distance(EmpiricalDist(s), m), 1e-3);
}

TEST(KsDistance, SmallSamples) {
    EXPECT_NEAR(ks_distance(EmpiricalDist({0.0}), Measure::arcsine()), 0.5, 1e-15);
    EXPECT_NEAR(ks_distance(EmpiricalDist({-1.0, 0.0, 1.0}), Measure::arcsine()), 1.0 / 3.0, 1e-15);
    // The atom at 0 absorbs a point mass there exactly.
    EXPECT_NEAR(ks_distance(EmpiricalDist({0.0}), Measure::cm_mixture()), 0.25, 1e-15);
    EXPECT_THROW(ks_distance(EmpiricalDist{}, Measure::arcsine()), std::domain_error);
    EXPECT_THROW(EmpiricalDist({1.5}), std::domain_error);
}

TEST(KsDistance, MatchesDenseGridSupremum) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto m = Measure::arcsine();
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> s(50);
        for (auto& v : s) v = u(rng);
        const double ks = ks_distance(EmpiricalDist(s), m);
        double grid = 0.0;
        for (int i = 0; i <= 200000; ++i) {
            const double t = -1.0 + i * 1e-5;
            double below = 0;
            for (double v : s) below += v <= t;
            grid = std::max(grid, std::abs(below / s.size() - m.cdf(t)));
        }
        EXPECT_GE(ks + 1e-12, grid);
        EXPECT_LE(ks - grid, 2e-3);
    }
}

TEST(KsDistance, GaussianRatiosApproachArcsine) {
    std::vector<double> r;
    for (u64 p : primes_up_to(1000000))
        if (const auto s = canonical_split(p)) r.push_back(s->ratio);
    EXPECT_LE(ks_distance(EmpiricalDist(r), Measure::arcsine()), 0.01);
}

TEST(ErdosTuran, ConstantSequence) {
    const std::vector<double> zeros(100, 0.0);
    const auto b = erdos_turan_bound(zeros, 0.4, 0.6, UniformAngleMeasure{}, 2);
    EXPECT_NEAR(b.lhs, 20.0, 1e-9);
    EXPECT_NEAR(b.rhs, 550.0, 1e-9);
    EXPECT_TRUE(b.holds());
    EXPECT_THROW(erdos_turan_bound(zeros, 0.4, 0.6, UniformAngleMeasure{}, 1), std::domain_error);
    EXPECT_THROW(erdos_turan_bound(zeros, 0.6, 0.4, UniformAngleMeasure{}, 4), std::domain_error);
}

TEST(ErdosTuran, HoldsOnRandomSequences) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> len(1, 500), tt(2, 60);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(len(rng));
        for (auto& v : a) v = u(rng);
        double lo = u(rng), hi = u(rng);
        if (lo > hi) std::swap(lo, hi);
        EXPECT_TRUE(erdos_turan_bound(a, lo, hi, UniformAngleMeasure{}, tt(rng)).holds()) << trial;
    }
}

TEST(ErdosTuran, ExponentialSumsMatchDirectEvaluation) {
    std::vector<double> a;
    for (u64 p : primes_up_to(100000))
        if (const auto s = canonical_split(p)) a.push_back(hecke_angle(*s));
    const auto fast = exponential_sum_moduli(a, 40, 1);
    EXPECT_EQ(exponential_sum_moduli(a, 40, 3), fast);
    for (int m : {1, 7, 16, 33, 40}) {
        double re = 0, im = 0;
        for (double v : a) {
            re += std::cos(2 * std::numbers::pi * m * v);
            im += std::sin(2 * std::numbers::pi * m * v);
        }
        EXPECT_NEAR(fast[m], std::hypot(re, im), 1e-6) << m;
    }
}

TEST(BvTable, AllPrimesOnTrivialModulusHasNoError) {
    const auto primes = primes_up_to(10000);
    const auto t = bv_table({primes, 1.0, 1}, primes, 1, geometric_grid(10000));
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0].abs_err, 0.0);
}

TEST(BvTable, RowsMatchDirectRecount) {
    const u64 x = 20000;
    const auto primes = primes_up_to(x);
    std::vector<u64> members;
    for (u64 p : primes)
        if (in_P_eps(p, 0.5)) members.push_back(p);
    const double delta = density_P_eps(0.5);
    const auto grid = geometric_grid(x);
    EXPECT_EQ(grid.size(), 16u);
    EXPECT_EQ(grid.front(), 2u);
    EXPECT_EQ(grid.back(), x);
    const auto t = bv_table({members, delta, 4}, primes, 60, grid, 2);
    EXPECT_EQ(t.rows.size(), 30u);  // odd q up to 60
    double agg = 0.0;
    for (const auto& row : t.rows) {
        const u64 q = row.q;
        ASSERT_EQ(q % 2, 1u);
        double worst = 0.0;
        for (u64 y : grid) {
            double pi_y = 0;
            for (u64 p : primes) pi_y += p <= y;
            for (u64 a = 0; a < q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                double c = 0;
                for (u64 p : members) c += (p <= y && p % q == a);
                worst = std::max(worst, std::abs(c - delta * pi_y / euler_phi(q)));
            }
        }
        EXPECT_NEAR(row.abs_err, worst, 1e-9) << q;
        agg += worst;
    }
    EXPECT_NEAR(t.aggregate, agg, 1e-6);
    EXPECT_NEAR(t.aggregate_normalized, agg / (delta * primes.size()), 1e-9);
    EXPECT_THROW(bv_table({members, delta, 4}, primes, x + 1, grid), std::invalid_argument);
}

TEST(BvTable, JsonAndCsvCarryEveryRow) {
    const auto primes = primes_up_to(1000);
    const auto t = bv_table({primes, 1.0, 1}, primes, 10, geometric_grid(1000));
    EXPECT_EQ(bv_json(t).size(), t.rows.size());
    std::ostringstream os;
    write_bv_csv(os, t);
    const auto text = os.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(t.rows.size() + 1));
}
