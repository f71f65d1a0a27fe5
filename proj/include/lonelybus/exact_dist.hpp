#pragma once

// Exact law of the lonely-passenger count without enumerating
// configurations: a bus-by-bus dynamic programme over (passengers placed,
// buses used, singleton buses so far).

#include "lonelybus/rational.hpp"

#include <string>
#include <vector>

namespace lonelybus {

/// W[s] = number of maps [n] -> [k] with exactly s singleton buses.
///
/// Buses are filled one at a time: bus k' takes j of the remaining
/// passengers in C(n', j) ways and contributes a singleton iff j == 1.
inline std::vector<BigInt> singleton_ways(int n, int k)
{
    if (n < 0 || k < 0) throw InputError("singleton_ways needs n >= 0 and k >= 0");
    BinomialTable binom(static_cast<std::size_t>(n));

    // prev[p][s] with k' - 1 buses; base: zero buses hold zero passengers.
    std::vector<std::vector<BigInt>> prev(n + 1, std::vector<BigInt>(n + 1, BigInt(0)));
    prev[0][0] = 1;
    for (int bus = 1; bus <= k; ++bus) {
        std::vector<std::vector<BigInt>> cur(n + 1, std::vector<BigInt>(n + 1, BigInt(0)));
        for (int placed = 0; placed <= n; ++placed) {
            for (int j = 0; j <= placed; ++j) {
                const BigInt& ways = binom(placed, j);
                const int bump = (j == 1) ? 1 : 0;
                for (int s = bump; s <= n; ++s) {
                    const BigInt& before = prev[placed - j][s - bump];
                    if (before != 0) cur[placed][s] += ways * before;
                }
            }
        }
        prev = std::move(cur);
    }
    return prev[n];
}

struct LonelyPmf {
    int n = 0;
    int k = 0;
    std::vector<Probability> mass;  // indexed by lonely count 0..n

    Rational mean() const
    {
        Rational total{0};
        for (std::size_t s = 0; s < mass.size(); ++s) total += Rational(static_cast<long>(s)) * mass[s].value();
        return total;
    }
};

inline void validate_nk(int n, int k)
{
    if (n < 2) throw InputError("n must be at least 2 (got " + std::to_string(n) + ")");
    if (k < 1) throw InputError("k must be at least 1 (got " + std::to_string(k) + ")");
}

inline LonelyPmf exact_pmf(int n, int k)
{
    validate_nk(n, k);
    const auto ways = singleton_ways(n, k);
    const BigInt total = ipow(k, n);
    LonelyPmf pmf{n, k, {}};
    pmf.mass.reserve(ways.size());
    for (const auto& w : ways) pmf.mass.push_back(Probability::ratio(w, total));
    return pmf;
}

inline Probability tail_from_pmf(const LonelyPmf& pmf, int r)
{
    Rational sum{0};
    for (int s = r; s <= pmf.n; ++s) sum += pmf.mass[s].value();
    return Probability(sum);
}

/// p_{n,k,r} = P(L >= r).
inline Probability tail_prob(int n, int k, int r)
{
    validate_nk(n, k);
    if (r < 1 || r > n) throw InputError("r must lie in [1, n] (got " + std::to_string(r) + ")");
    return tail_from_pmf(exact_pmf(n, k), r);
}

/// n (1 - 1/k)^(n-1), by linearity over passengers.
inline Rational expected_lonely(int n, int k)
{
    validate_nk(n, k);
    Rational stay(k - 1, k);
    Rational out(n);
    for (int i = 0; i < n - 1; ++i) out *= stay;
    return out;
}

struct DominanceEntry {
    int k = 0;
    int r = 0;
    Probability lower;   // p_{n,k,r}
    Probability upper;   // p_{n,k+1,r}
    bool holds = false;  // upper >= lower
    bool strict = false; // upper > lower
};

struct DominanceReport {
    int n = 0;
    int k_max = 0;
    std::vector<DominanceEntry> entries;  // k-major, then r

    /// Weak dominance everywhere and strictness at r = 1 for every k.
    bool passed() const
    {
        for (const auto& e : entries) {
            if (!e.holds) return false;
            if (e.r == 1 && !e.strict) return false;
        }
        return true;
    }
};

inline DominanceReport dominance_report(int n, int k_max)
{
    validate_nk(n, k_max);
    DominanceReport report{n, k_max, {}};
    LonelyPmf lower = exact_pmf(n, 1);
    for (int k = 1; k <= k_max; ++k) {
        LonelyPmf upper = exact_pmf(n, k + 1);
        for (int r = 1; r <= n; ++r) {
            DominanceEntry e{k, r, tail_from_pmf(lower, r), tail_from_pmf(upper, r)};
            e.holds = e.upper >= e.lower;
            e.strict = e.upper > e.lower;
            report.entries.push_back(std::move(e));
        }
        lower = std::move(upper);
    }
    return report;
}

}  // namespace lonelybus
