#pragma once

// Configurations, occupancy vectors, the lonely-count statistic, the
// reassignment coupling and exhaustive enumeration of [k+1]^n x [k]^n.
//
// Bus and passenger indices are 1-based. A Configuration stores, for
// passenger p, its initial bus in assignment[p-1] (values 1..k+1) and the
// reassignment target Y_p in targets[p-1] (values 1..k).

#include "lonelybus/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace lonelybus {

struct Params {
    int n = 2;
    int k = 1;
    std::optional<int> r;

    void validate() const
    {
        if (n < 2) throw InputError("n must be at least 2 (got " + std::to_string(n) + ")");
        if (k < 1) throw InputError("k must be at least 1 (got " + std::to_string(k) + ")");
        if (r && (*r < 1 || *r > n)) {
            throw InputError("r must lie in [1, n] (got " + std::to_string(*r) + ")");
        }
    }

    int threshold() const
    {
        if (!r) throw InputError("lonely threshold r is required");
        return *r;
    }
};

struct Configuration {
    std::vector<int> assignment;
    std::vector<int> targets;

    int size() const { return static_cast<int>(assignment.size()); }
    int bus_of(int passenger) const { return assignment[passenger - 1]; }
    int target(int j) const { return targets[j - 1]; }

    friend bool operator==(const Configuration&, const Configuration&) = default;
    // Lexicographic on the concatenation (assignment, targets).
    friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

inline std::string to_string(const Configuration& c)
{
    auto seq = [](const std::vector<int>& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return s + ")";
    };
    return "assignment " + seq(c.assignment) + " targets " + seq(c.targets);
}

inline std::ostream& operator<<(std::ostream& os, const Configuration& c) { return os << to_string(c); }

inline void validate(const Configuration& c, const Params& p)
{
    if (c.size() != p.n || static_cast<int>(c.targets.size()) != p.n) {
        throw InputError("configuration must have exactly n=" + std::to_string(p.n) + " entries per sequence");
    }
    for (int v : c.assignment) {
        if (v < 1 || v > p.k + 1) throw InputError("assignment entry " + std::to_string(v) + " outside [1, k+1]");
    }
    for (int v : c.targets) {
        if (v < 1 || v > p.k) throw InputError("target entry " + std::to_string(v) + " outside [1, k]");
    }
}

class Occupancy {
public:
    Occupancy() = default;
    explicit Occupancy(std::vector<int> loads) : loads_(std::move(loads)) {}

    int bus_count() const { return static_cast<int>(loads_.size()); }
    int load(int bus) const { return loads_[bus - 1]; }
    const std::vector<int>& loads() const { return loads_; }

    int total() const
    {
        int t = 0;
        for (int x : loads_) t += x;
        return t;
    }

    friend bool operator==(const Occupancy&, const Occupancy&) = default;

private:
    std::vector<int> loads_;
};

inline Occupancy occupancy_from_assignment(std::span<const int> assignment, int bus_count)
{
    std::vector<int> loads(static_cast<std::size_t>(std::max(bus_count, 0)), 0);
    for (int bus : assignment) {
        if (bus < 1 || bus > bus_count) {
            throw InputError("bus index " + std::to_string(bus) + " outside [1, " + std::to_string(bus_count) + "]");
        }
        ++loads[bus - 1];
    }
    return Occupancy(std::move(loads));
}

/// Number of buses carrying exactly one passenger.
inline int lonely_count(const Occupancy& occupancy)
{
    return static_cast<int>(std::count(occupancy.loads().begin(), occupancy.loads().end(), 1));
}

struct Reassignment {
    std::vector<int> assignment;  // values in 1..k
    Occupancy loads;              // X'_1..X'_k
};

/// Passengers on bus k+1, in increasing index, move to Y_1, Y_2, ... in turn.
inline Reassignment reassign_unchecked(const Configuration& config, int k)
{
    Reassignment out;
    out.assignment = config.assignment;
    int used = 0;
    for (auto& bus : out.assignment) {
        if (bus == k + 1) bus = config.targets[used++];
    }
    out.loads = occupancy_from_assignment(out.assignment, k);
    return out;
}

inline Reassignment reassign(const Configuration& config, const Params& params)
{
    params.validate();
    validate(config, params);
    return reassign_unchecked(config, params.k);
}

struct EnumerationLimits {
    static constexpr std::uint64_t default_cap = 100'000'000;

    std::uint64_t max_configurations = default_cap;
    unsigned workers = 1;
};

/// The uniform sample space [k+1]^n x [k]^n in lexicographic order of the
/// concatenated sequences; index 0 is all ones.
class ConfigurationSpace {
public:
    explicit ConfigurationSpace(const Params& params) : params_(params)
    {
        params_.validate();
        required_ = ipow(params_.k + 1, params_.n) * ipow(params_.k, params_.n);
    }

    const Params& params() const { return params_; }
    const BigInt& required_count() const { return required_; }

    /// Each configuration carries weight 1/((k+1)^n k^n).
    Probability weight() const { return Probability::ratio(1, required_); }

    /// Total count, or ResourceError if it exceeds `cap`.
    std::uint64_t checked_size(std::uint64_t cap) const
    {
        if (required_ > cap) {
            throw ResourceError("enumeration of n=" + std::to_string(params_.n) + ", k=" +
                                    std::to_string(params_.k) + " needs " + required_.str() +
                                    " configurations, above the cap of " + std::to_string(cap),
                                required_);
        }
        return required_.convert_to<std::uint64_t>();
    }

    Configuration decode(std::uint64_t index) const
    {
        Configuration c;
        c.assignment.assign(params_.n, 1);
        c.targets.assign(params_.n, 1);
        for (int j = params_.n - 1; j >= 0; --j) {
            c.targets[j] = static_cast<int>(index % params_.k) + 1;
            index /= params_.k;
        }
        for (int j = params_.n - 1; j >= 0; --j) {
            c.assignment[j] = static_cast<int>(index % (params_.k + 1)) + 1;
            index /= (params_.k + 1);
        }
        return c;
    }

    std::uint64_t encode(const Configuration& c) const
    {
        std::uint64_t index = 0;
        for (int v : c.assignment) index = index * (params_.k + 1) + (v - 1);
        for (int v : c.targets) index = index * params_.k + (v - 1);
        return index;
    }

    /// Odometer step to the lexicographic successor. Returns false on wrap.
    bool advance(Configuration& c) const
    {
        for (int j = params_.n - 1; j >= 0; --j) {
            if (c.targets[j] < params_.k) {
                ++c.targets[j];
                return true;
            }
            c.targets[j] = 1;
        }
        for (int j = params_.n - 1; j >= 0; --j) {
            if (c.assignment[j] < params_.k + 1) {
                ++c.assignment[j];
                return true;
            }
            c.assignment[j] = 1;
        }
        return false;
    }

private:
    Params params_;
    BigInt required_;
};

/// Visits every configuration once, in lexicographic order, with its index.
template <class Fn>
void enumerate_configurations(const Params& params, const EnumerationLimits& limits, Fn&& fn)
{
    const ConfigurationSpace space(params);
    const std::uint64_t total = space.checked_size(limits.max_configurations);
    Configuration c = space.decode(0);
    for (std::uint64_t i = 0; i < total; ++i) {
        fn(std::as_const(c), i);
        space.advance(c);
    }
}

/// Splits the index range into contiguous blocks, one per worker.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> partition_range(std::uint64_t total, unsigned workers)
{
    workers = std::max(1u, workers);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
    const std::uint64_t base = total / workers;
    const std::uint64_t extra = total % workers;
    std::uint64_t begin = 0;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t len = base + (w < extra ? 1 : 0);
        blocks.emplace_back(begin, begin + len);
        begin += len;
    }
    return blocks;
}

/// Parallel map-reduce over the configuration stream.
///
/// Each worker owns an `Acc` built by `make()`, visits a contiguous
/// lexicographic block via `visit(acc, config, index)`, and the blocks are
/// merged left to right with `acc.merge(std::move(other))`. Provided
/// `merge` is associative the result is independent of the worker count.
template <class Acc, class Make, class Visit>
Acc reduce_configurations(const Params& params, const EnumerationLimits& limits, Make&& make, Visit&& visit)
{
    const ConfigurationSpace space(params);
    const std::uint64_t total = space.checked_size(limits.max_configurations);
    const auto blocks = partition_range(total, limits.workers);

    std::vector<Acc> partial;
    partial.reserve(blocks.size());
    for (std::size_t w = 0; w < blocks.size(); ++w) partial.push_back(make());

    auto run_block = [&](std::size_t w) {
        const auto [begin, end] = blocks[w];
        if (begin == end) return;
        Configuration c = space.decode(begin);
        for (std::uint64_t i = begin; i < end; ++i) {
            visit(partial[w], std::as_const(c), i);
            space.advance(c);
        }
    };

    if (blocks.size() == 1) {
        run_block(0);
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(blocks.size());
        for (std::size_t w = 0; w < blocks.size(); ++w) threads.emplace_back(run_block, w);
    }

    Acc out = std::move(partial.front());
    for (std::size_t w = 1; w < partial.size(); ++w) out.merge(std::move(partial[w]));
    return out;
}

}  // namespace lonelybus
