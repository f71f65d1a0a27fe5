#pragma once

// Seedable sampling of the lonely count for parameters beyond exhaustive
// reach.
//
// Randomness comes from a counter-based generator: draw t of a stream with
// key K is splitmix64_mix(K + (t + 1) * golden). Worker w of a run seeded
// with s uses key splitmix64_mix(s ^ splitmix64_mix(w + 1)). Trials are
// dealt to workers in contiguous blocks, so an estimate depends only on
// (n, k, r, trials, seed, workers).

#include "lonelybus/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

namespace lonelybus {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    static constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ull;

    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static CounterRng for_worker(std::uint64_t seed, std::uint64_t worker)
    {
        return CounterRng(splitmix64_mix(seed ^ splitmix64_mix(worker + 1)));
    }

    std::uint64_t next()
    {
        ++counter_;
        return splitmix64_mix(key_ + counter_ * golden);
    }

    /// Uniform on {1, ..., bound}; rejects the top 2^64 mod bound values.
    int uniform_bus(int bound)
    {
        const auto b = static_cast<std::uint64_t>(bound);
        const std::uint64_t excess = (std::numeric_limits<std::uint64_t>::max() % b + 1) % b;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - excess;
        std::uint64_t u = next();
        while (u > limit) u = next();
        return static_cast<int>(u % b) + 1;
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// One uniform allocation of n passengers to k buses; returns its lonely count.
inline int sample_lonely_count(int n, int k, CounterRng& rng, std::vector<int>& scratch)
{
    scratch.assign(static_cast<std::size_t>(k), 0);
    for (int p = 0; p < n; ++p) ++scratch[rng.uniform_bus(k) - 1];
    return static_cast<int>(std::count(scratch.begin(), scratch.end(), 1));
}

inline int sample_lonely_count(int n, int k, CounterRng& rng)
{
    std::vector<int> scratch;
    return sample_lonely_count(n, k, rng, scratch);
}

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

inline constexpr double z95 = 1.959963984540054;

inline WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = z95)
{
    const double t = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / t;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * t)) / (1 + z2 / t);
    const double half = z / (1 + z2 / t) * std::sqrt(p * (1 - p) / t + z2 / (4 * t * t));
    WilsonInterval w{std::max(0.0, centre - half), std::min(1.0, centre + half)};
    // Rounding can push a bound past p at the extremes.
    w.low = std::min(w.low, p);
    w.high = std::max(w.high, p);
    return w;
}

struct Estimate {
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    Rational point;  // hits / trials
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t seed = 0;
    unsigned workers = 1;

    double point_value() const { return to_double(point); }
    double standard_error() const
    {
        const double p = point_value();
        return std::sqrt(std::max(p * (1 - p), 1e-300) / static_cast<double>(trials));
    }
    bool contains(double value) const { return ci_low <= value && value <= ci_high; }
};

/// Fraction of `trials` uniform allocations with at least r lonely passengers.
inline Estimate estimate_tail(int n, int k, int r, std::uint64_t trials, std::uint64_t seed, unsigned workers = 1)
{
    Params{n, k, r}.validate();
    if (trials < 1) throw InputError("trials must be at least 1");
    workers = std::max(1u, workers);

    const auto blocks = partition_range(trials, workers);
    std::vector<std::uint64_t> hits(blocks.size(), 0);
    auto run = [&](std::size_t w) {
        CounterRng rng = CounterRng::for_worker(seed, w);
        std::vector<int> scratch;
        std::uint64_t local = 0;
        for (std::uint64_t t = blocks[w].first; t < blocks[w].second; ++t) {
            if (sample_lonely_count(n, k, rng, scratch) >= r) ++local;
        }
        hits[w] = local;
    };
    if (blocks.size() == 1) {
        run(0);
    } else {
        std::vector<std::jthread> threads;
        for (std::size_t w = 0; w < blocks.size(); ++w) threads.emplace_back(run, w);
    }

    Estimate e;
    for (auto h : hits) e.hits += h;
    e.trials = trials;
    e.point = Rational(BigInt(e.hits), BigInt(trials));
    const auto ci = wilson_interval(e.hits, trials);
    e.ci_low = ci.low;
    e.ci_high = ci.high;
    e.seed = seed;
    e.workers = workers;
    return e;
}

}  // namespace lonelybus
