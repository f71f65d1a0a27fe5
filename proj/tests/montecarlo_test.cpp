#include "lonelybus/exact_dist.hpp"
#include "lonelybus/montecarlo.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lonelybus;

TEST(CounterRng, DeterministicPerKeyAndWorker)
{
    auto a = CounterRng::for_worker(42, 0);
    auto b = CounterRng::for_worker(42, 0);
    auto c = CounterRng::for_worker(42, 1);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        EXPECT_EQ(x, b.next());
        differs |= (x != c.next());
    }
    EXPECT_TRUE(differs);
    EXPECT_EQ(a.counter(), 100u);
}

TEST(CounterRng, UniformBusCoversRangeEvenly)
{
    CounterRng rng(7);
    const int k = 7;
    const int draws = 70000;
    std::vector<int> hist(k + 1, 0);
    for (int i = 0; i < draws; ++i) {
        const int b = rng.uniform_bus(k);
        ASSERT_GE(b, 1);
        ASSERT_LE(b, k);
        ++hist[b];
    }
    double chi2 = 0;
    for (int b = 1; b <= k; ++b) chi2 += std::pow(hist[b] - draws / double(k), 2) / (draws / double(k));
    EXPECT_LT(chi2, 22.46);  // 6 dof, p = 0.001
}

TEST(Wilson, KnownIntervals)
{
    auto mid = wilson_interval(50, 100);
    EXPECT_NEAR(mid.low, 0.4038315303659956, 1e-12);
    EXPECT_NEAR(mid.high, 0.5961684696340044, 1e-12);
    auto none = wilson_interval(0, 10);
    EXPECT_EQ(none.low, 0.0);
    EXPECT_NEAR(none.high, 0.2775327998628892, 1e-12);
    auto all = wilson_interval(10, 10);
    EXPECT_NEAR(all.low, 0.7224672001371107, 1e-12);
    EXPECT_LE(all.high, 1.0);
    EXPECT_GE(all.high, 1.0 - 1e-12);
}

TEST(SampleLonelyCount, OneBusNeverLonely)
{
    CounterRng rng(1);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_lonely_count(5, 1, rng), 0);
}

TEST(SampleLonelyCount, TwoPassengersTwoBuses)
{
    CounterRng rng = CounterRng::for_worker(2024, 0);
    const std::uint64_t trials = 100000;
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) hits += sample_lonely_count(2, 2, rng) >= 1;
    const auto ci = wilson_interval(hits, trials);
    EXPECT_LE(ci.low, 0.5);
    EXPECT_GE(ci.high, 0.5);
}

TEST(SampleLonelyCount, MeanMatchesExpectation)
{
    CounterRng rng = CounterRng::for_worker(99, 3);
    const int trials = 100000;
    double sum = 0, sq = 0;
    for (int t = 0; t < trials; ++t) {
        const double x = sample_lonely_count(5, 4, rng);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sq / trials - mean * mean) / trials);
    const double exact = to_double(expected_lonely(5, 4));
    EXPECT_NEAR(exact, 5 * std::pow(0.75, 4), 1e-15);
    EXPECT_LT(std::abs(mean - exact), 4 * se);
}

TEST(EstimateTail, ImpossibleEvent)
{
    const auto e = estimate_tail(2, 1, 1, 5000, 3);
    EXPECT_EQ(e.hits, 0u);
    EXPECT_EQ(e.point, 0);
    EXPECT_EQ(e.ci_low, 0.0);
    EXPECT_GT(e.ci_high, 0.0);
    EXPECT_LT(e.ci_high, 0.001);
}

TEST(EstimateTail, CoversExactValues)
{
    const auto small = estimate_tail(3, 2, 1, 100000, 12345);
    EXPECT_TRUE(small.contains(0.75)) << small.ci_low << " " << small.ci_high;

    const auto big = estimate_tail(10, 5, 1, 100000, 20251017);
    EXPECT_TRUE(big.contains(to_double(tail_prob(10, 5, 1).value()))) << big.ci_low << " " << big.ci_high;
}

// Any single seed misses 5% of the time; coverage over many seeds is the
// real check on the generator.
TEST(EstimateTail, CoverageOverSeeds)
{
    const double exact = to_double(tail_prob(10, 5, 1).value());
    int covered = 0;
    double z_sum = 0, z_sq = 0;
    const int runs = 300;
    for (int seed = 0; seed < runs; ++seed) {
        const auto e = estimate_tail(10, 5, 1, 20000, seed);
        covered += e.contains(exact);
        const double z = (e.point_value() - exact) / e.standard_error();
        z_sum += z;
        z_sq += z * z;
    }
    EXPECT_GE(covered, 0.92 * runs);
    EXPECT_LT(std::abs(z_sum / runs), 0.25);
    EXPECT_NEAR(z_sq / runs, 1.0, 0.25);
}

TEST(EstimateTail, ReproducibleAtFixedWorkerCount)
{
    for (unsigned w : {1u, 3u, 8u}) {
        const auto a = estimate_tail(6, 4, 2, 20001, 77, w);
        const auto b = estimate_tail(6, 4, 2, 20001, 77, w);
        EXPECT_EQ(a.hits, b.hits);
        EXPECT_EQ(a.ci_low, b.ci_low);
        EXPECT_EQ(a.ci_high, b.ci_high);
        EXPECT_EQ(a.workers, w);
        EXPECT_LE(a.ci_low, a.point_value());
        EXPECT_LE(a.point_value(), a.ci_high);
    }
    EXPECT_NE(estimate_tail(6, 4, 2, 20001, 77).hits, estimate_tail(6, 4, 2, 20001, 78).hits);
}

TEST(EstimateTail, Validation)
{
    EXPECT_THROW(estimate_tail(3, 2, 1, 0, 1), InputError);
    EXPECT_THROW(estimate_tail(3, 2, 4, 10, 1), InputError);
    EXPECT_THROW(estimate_tail(1, 2, 1, 10, 1), InputError);
}

TEST(EstimateTail, CalibrationAcrossGrid)
{
    int runs = 0, covered = 0;
    std::uint64_t seed = 1000;
    for (int n : {3, 5, 8}) {
        for (int k : {2, 3, 5}) {
            for (int r : {1, 2}) {
                const auto e = estimate_tail(n, k, r, 100000, seed++, 4);
                const double exact = to_double(tail_prob(n, k, r).value());
                ++runs;
                covered += e.contains(exact);
                const double se = std::max(e.standard_error(), 1e-9);
                EXPECT_LT(std::abs(e.point_value() - exact), 5 * se) << n << "," << k << "," << r;
            }
        }
    }
    EXPECT_GE(covered, 0.8 * runs) << covered << "/" << runs;
}

TEST(EstimateTail, MonotoneInBusCount)
{
    std::uint64_t seed = 500;
    for (int n : {3, 5, 8}) {
        for (int k : {2, 3, 5}) {
            const auto lo = estimate_tail(n, k, 1, 100000, seed++);
            const auto hi = estimate_tail(n, k + 1, 1, 100000, seed++);
            const double se = std::hypot(lo.standard_error(), hi.standard_error());
            EXPECT_GE(hi.point_value(), lo.point_value() - 3 * se) << n << "," << k;
        }
    }
}
