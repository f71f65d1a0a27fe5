#pragma once

// Constructive maps of the two coupling arguments and the exhaustive
// verification that every event-level claim holds exactly for concrete
// (n, k, r).

#include "lonelybus/events.hpp"
#include "lonelybus/exact_dist.hpp"
#include "lonelybus/model.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lonelybus {

enum class Relation { less, less_equal, equal, greater_equal, greater };

inline const char* symbol(Relation rel)
{
    switch (rel) {
    case Relation::less: return "<";
    case Relation::less_equal: return "<=";
    case Relation::equal: return "=";
    case Relation::greater_equal: return ">=";
    case Relation::greater: return ">";
    }
    return "?";
}

inline bool relation_holds(const Rational& lhs, Relation rel, const Rational& rhs)
{
    switch (rel) {
    case Relation::less: return lhs < rhs;
    case Relation::less_equal: return lhs <= rhs;
    case Relation::equal: return lhs == rhs;
    case Relation::greater_equal: return lhs >= rhs;
    case Relation::greater: return lhs > rhs;
    }
    return false;
}

struct ClaimRecord {
    std::string name;
    Rational lhs;
    Relation relation = Relation::equal;
    Rational rhs;
    bool holds = false;
    std::optional<Configuration> counterexample;  // lexicographically first violator
};

struct EventRecord {
    std::string name;
    BigInt count;
    Probability probability;
};

struct VerificationReport {
    int theorem = 1;
    Params params;
    int truncation_m = 0;  // cells of the index set are kept for m <= truncation_m
    BigInt configurations;
    std::vector<EventRecord> events;
    std::vector<ClaimRecord> claims;
    std::vector<std::pair<std::string, bool>> observations;  // informational, never verdicts
    bool unit_branch_hit = false;   // some nonempty E cell with m + l - r == 1
    bool other_branch_hit = false;  // some nonempty E cell with m + l - r != 1

    bool passed() const
    {
        return std::all_of(claims.begin(), claims.end(), [](const ClaimRecord& c) { return c.holds; });
    }

    std::vector<const ClaimRecord*> failures() const
    {
        std::vector<const ClaimRecord*> out;
        for (const auto& c : claims) {
            if (!c.holds) out.push_back(&c);
        }
        return out;
    }

    const ClaimRecord* find_claim(const std::string& name) const
    {
        for (const auto& c : claims) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }

    const EventRecord* find_event(const std::string& name) const
    {
        for (const auto& e : events) {
            if (e.name == name) return &e;
        }
        return nullptr;
    }
};

namespace detail {

// Hit counter remembering the smallest configuration index it saw.
struct Tally {
    std::uint64_t count = 0;
    std::uint64_t first = std::numeric_limits<std::uint64_t>::max();

    void hit(std::uint64_t index)
    {
        ++count;
        first = std::min(first, index);
    }

    void merge(const Tally& other)
    {
        count += other.count;
        first = std::min(first, other.first);
    }
};

inline void merge_all(std::vector<Tally>& into, const std::vector<Tally>& from)
{
    for (std::size_t i = 0; i < into.size(); ++i) into[i].merge(from[i]);
}

inline std::string cell_name(const char* family, Cell cell)
{
    return std::string(family) + "[" + std::to_string(cell.m) + "," + std::to_string(cell.l) + "]";
}

inline std::string set_name(std::uint64_t mask)
{
    std::string s = "{";
    bool first = true;
    for (int j : subset_members(mask)) {
        if (!first) s += ",";
        s += std::to_string(j);
        first = false;
    }
    return s + "}";
}

class ReportBuilder {
public:
    ReportBuilder(VerificationReport& report, const ConfigurationSpace& space, std::uint64_t total)
        : report_(report), space_(space), total_(total)
    {
    }

    Rational prob(const Tally& t) const { return Rational(BigInt(t.count), BigInt(total_)); }
    Rational prob(std::uint64_t count) const { return Rational(BigInt(count), BigInt(total_)); }

    void event(std::string name, const Tally& t)
    {
        report_.events.push_back({std::move(name), BigInt(t.count), Probability(prob(t))});
    }

    void claim(std::string name, Rational lhs, Relation rel, Rational rhs,
               std::optional<std::uint64_t> witness = std::nullopt)
    {
        ClaimRecord c{std::move(name), std::move(lhs), rel, std::move(rhs), false, std::nullopt};
        c.holds = relation_holds(c.lhs, rel, c.rhs);
        if (!c.holds && witness) c.counterexample = space_.decode(*witness);
        report_.claims.push_back(std::move(c));
    }

    /// Pointwise claim: the violating set has probability zero.
    void empty(std::string name, const Tally& violations)
    {
        claim(std::move(name), prob(violations), Relation::equal, Rational(0),
              violations.count ? std::optional<std::uint64_t>(violations.first) : std::nullopt);
    }

private:
    VerificationReport& report_;
    const ConfigurationSpace& space_;
    std::uint64_t total_;
};

inline std::vector<int> riders(const Configuration& c, int k)
{
    std::vector<int> out;
    for (int p = 1; p <= c.size(); ++p) {
        if (c.bus_of(p) == k + 1) out.push_back(p);
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Single-lonely bijection between B_m and pairs (sigma in C_{m,1}, rider i)

/// Everyone on bus k+1 except passenger i moves to bus Y_1.
inline Configuration bijection_forward(const Configuration& sigma, int i, const Params& p)
{
    p.validate();
    validate(sigma, p);
    const CouplingView v(sigma, p.k);
    const int m = v.on_spare();
    if (!in_C(v, sigma, m, 1)) {
        throw ContractError("bijection_forward: " + to_string(sigma) + " is not in C_{m,1}");
    }
    if (i < 1 || i > p.n || sigma.bus_of(i) != p.k + 1) {
        throw ContractError("bijection_forward: passenger " + std::to_string(i) + " is not on bus k+1");
    }
    Configuration tau = sigma;
    const int y1 = sigma.target(1);
    for (int q = 1; q <= p.n; ++q) {
        if (q != i && tau.assignment[q - 1] == p.k + 1) tau.assignment[q - 1] = y1;
    }
    return tau;
}

/// Everyone on bus Y_1 moves to bus k+1; returns the source and the
/// passenger who was alone on bus k+1.
inline std::pair<Configuration, int> bijection_backward(const Configuration& tau, const Params& p)
{
    p.validate();
    validate(tau, p);
    const CouplingView v(tau, p.k);
    if (!classify_theorem1(v, tau, p.n).m_if_B) {
        throw ContractError("bijection_backward: " + to_string(tau) + " is not in any B_m");
    }
    const int y1 = tau.target(1);
    Configuration sigma = tau;
    int lone = 0;
    for (int q = 1; q <= p.n; ++q) {
        if (tau.bus_of(q) == p.k + 1) lone = q;
        if (tau.bus_of(q) == y1) sigma.assignment[q - 1] = p.k + 1;
    }
    return {std::move(sigma), lone};
}

// ---------------------------------------------------------------------------
// r-lonely association map from E_{m,l,[r-l]} into D_{m,l}

/// m! / (m + l - r)!
inline BigInt association_multiplicity(Cell cell, int r)
{
    return falling_factorial(cell.m, r - cell.l);
}

/// All configurations obtained from sigma by keeping one rider on bus k+1,
/// sending one rider to each of Y_1..Y_{r-l-1} and the rest to Y_{r-l}.
/// Sorted lexicographically.
inline std::vector<Configuration> association_expand(const Configuration& sigma, Cell cell, const Params& p)
{
    p.validate();
    validate(sigma, p);
    const int r = p.threshold();
    const CouplingView v(sigma, p.k);
    if (!in_E(v, sigma, r, cell, prefix_set(r - cell.l))) {
        throw ContractError("association_expand: " + to_string(sigma) + " is not in " +
                            detail::cell_name("E", cell) + " with S = [r-l]");
    }
    const auto riders = detail::riders(sigma, p.k);
    const int slots = r - cell.l - 1;
    const int bulk_bus = sigma.target(r - cell.l);

    std::vector<Configuration> out;
    std::vector<int> slot_of(riders.size(), -1);  // -1: unassigned, -2: stays
    auto emit = [&] {
        Configuration tau = sigma;
        for (std::size_t q = 0; q < riders.size(); ++q) {
            int& bus = tau.assignment[riders[q] - 1];
            if (slot_of[q] == -2) bus = p.k + 1;
            else if (slot_of[q] >= 0) bus = sigma.target(slot_of[q] + 1);
            else bus = bulk_bus;
        }
        out.push_back(std::move(tau));
    };
    auto fill = [&](auto&& self, int slot) -> void {
        if (slot == slots) {
            emit();
            return;
        }
        for (std::size_t q = 0; q < riders.size(); ++q) {
            if (slot_of[q] != -1) continue;
            slot_of[q] = slot;
            self(self, slot + 1);
            slot_of[q] = -1;
        }
    };
    for (std::size_t stay = 0; stay < riders.size(); ++stay) {
        slot_of[stay] = -2;
        fill(fill, 0);
        slot_of[stay] = -1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// True iff tau arises from sigma by one choice of the association move.
inline bool is_association_image(const Configuration& sigma, const Configuration& tau, Cell cell, int r, int k)
{
    if (sigma.targets != tau.targets || sigma.size() != tau.size()) return false;
    const int width = r - cell.l;
    if (width < 1 || width > sigma.size()) return false;
    std::vector<int> arrivals(width + 1, 0);  // slot 0: stays on k+1
    for (int q = 1; q <= sigma.size(); ++q) {
        if (sigma.bus_of(q) != k + 1) {
            if (tau.bus_of(q) != sigma.bus_of(q)) return false;
            continue;
        }
        const int bus = tau.bus_of(q);
        int slot = -1;
        if (bus == k + 1) {
            slot = 0;
        } else {
            for (int i = 1; i <= width; ++i) {
                if (sigma.target(i) == bus) {
                    slot = i;
                    break;
                }
            }
        }
        if (slot < 0) return false;
        ++arrivals[slot];
    }
    if (arrivals[0] != 1) return false;
    for (int i = 1; i < width; ++i) {
        if (arrivals[i] != 1) return false;
    }
    return arrivals[width] == cell.m + cell.l - r;
}

/// The unique candidate source of tau: everyone on Y_1..Y_{r-l} moves back
/// to bus k+1. Empty when the candidate is not in E_{m,l,[r-l]} or does not
/// map onto tau.
inline std::optional<Configuration> association_invert(const Configuration& tau, Cell cell, const Params& p)
{
    p.validate();
    validate(tau, p);
    const int r = p.threshold();
    if (!in_index_set(cell, r) || cell.m > p.n) return std::nullopt;
    const int width = r - cell.l;
    Configuration sigma = tau;
    for (int q = 1; q <= p.n; ++q) {
        for (int i = 1; i <= width; ++i) {
            if (tau.bus_of(q) == tau.target(i)) {
                sigma.assignment[q - 1] = p.k + 1;
                break;
            }
        }
    }
    const CouplingView v(sigma, p.k);
    if (!in_E(v, sigma, r, cell, prefix_set(width))) return std::nullopt;
    if (!is_association_image(sigma, tau, cell, r, p.k)) return std::nullopt;
    return sigma;
}

// ---------------------------------------------------------------------------
// Exhaustive verification

namespace detail {

struct SingleLonelyTally {
    Tally A, A_prime, A_not_A_prime, A_prime_not_A;
    Tally b_overlap, gain_on_small_spare;
    std::vector<Tally> B, B_prime, gain_at, b_outside, b_prime_missing, forward_fail, backward_fail;
    std::vector<std::vector<Tally>> C;

    explicit SingleLonelyTally(int n)
        : B(n + 1), B_prime(n + 1), gain_at(n + 1), b_outside(n + 1), b_prime_missing(n + 1),
          forward_fail(n + 1), backward_fail(n + 1), C(n + 1, std::vector<Tally>(n + 1))
    {
    }

    void merge(SingleLonelyTally&& o)
    {
        A.merge(o.A);
        A_prime.merge(o.A_prime);
        A_not_A_prime.merge(o.A_not_A_prime);
        A_prime_not_A.merge(o.A_prime_not_A);
        b_overlap.merge(o.b_overlap);
        gain_on_small_spare.merge(o.gain_on_small_spare);
        merge_all(B, o.B);
        merge_all(B_prime, o.B_prime);
        merge_all(gain_at, o.gain_at);
        merge_all(b_outside, o.b_outside);
        merge_all(b_prime_missing, o.b_prime_missing);
        merge_all(forward_fail, o.forward_fail);
        merge_all(backward_fail, o.backward_fail);
        for (std::size_t m = 0; m < C.size(); ++m) merge_all(C[m], o.C[m]);
    }
};

}  // namespace detail

inline VerificationReport verify_theorem1(int n, int k, const EnumerationLimits& limits = {})
{
    const Params params{n, k, std::nullopt};
    const ConfigurationSpace space(params);
    const std::uint64_t total = space.checked_size(limits.max_configurations);

    auto acc = reduce_configurations<detail::SingleLonelyTally>(
        params, limits, [n] { return detail::SingleLonelyTally(n); },
        [&](detail::SingleLonelyTally& t, const Configuration& c, std::uint64_t index) {
            const CouplingView v(c, k);
            const auto f = classify_theorem1(v, c, n);
            const bool loses = f.in_A && !f.in_A_prime;
            const bool gains = f.in_A_prime && !f.in_A;
            if (f.in_A) t.A.hit(index);
            if (f.in_A_prime) t.A_prime.hit(index);
            if (loses) t.A_not_A_prime.hit(index);
            if (gains) {
                t.A_prime_not_A.hit(index);
                const int s = v.on_spare();
                if (s <= 1) {
                    t.gain_on_small_spare.hit(index);
                } else {
                    t.gain_at[s].hit(index);
                    if (!in_B_prime(v, c, s)) t.b_prime_missing[s].hit(index);
                }
            }
            if (f.b_cells > 1) t.b_overlap.hit(index);

            if (f.m_if_B) {
                const int m = *f.m_if_B;
                t.B[m].hit(index);
                if (!loses) t.b_outside[m].hit(index);
                try {
                    const auto [sigma, i] = bijection_backward(c, params);
                    const CouplingView vs(sigma, k);
                    const bool ok = in_C(vs, sigma, m, 1) && sigma.bus_of(i) == k + 1 &&
                                    bijection_forward(sigma, i, params) == c;
                    if (!ok) t.backward_fail[m].hit(index);
                } catch (const ContractError&) {
                    t.backward_fail[m].hit(index);
                }
            }
            if (f.m_if_B_prime) {
                const int m = *f.m_if_B_prime;
                t.B_prime[m].hit(index);
                for (int i : f.c_witnesses) t.C[m][i].hit(index);
                if (!f.c_witnesses.empty() && f.c_witnesses.front() == 1) {
                    for (int i : detail::riders(c, k)) {
                        try {
                            const Configuration tau = bijection_forward(c, i, params);
                            const CouplingView vt(tau, k);
                            const bool ok = in_B(vt, tau, m) && bijection_backward(tau, params) == std::pair{c, i};
                            if (!ok) t.forward_fail[m].hit(index);
                        } catch (const ContractError&) {
                            t.forward_fail[m].hit(index);
                        }
                    }
                }
            }
        });

    VerificationReport report;
    report.theorem = 1;
    report.params = params;
    report.truncation_m = n;
    report.configurations = space.required_count();
    detail::ReportBuilder b(report, space, total);

    b.event("A", acc.A);
    b.event("A'", acc.A_prime);
    b.event("A and not A'", acc.A_not_A_prime);
    b.event("A' and not A", acc.A_prime_not_A);
    for (int m = 2; m <= n; ++m) {
        b.event("B[" + std::to_string(m) + "]", acc.B[m]);
        b.event("B'[" + std::to_string(m) + "]", acc.B_prime[m]);
        for (int i = 1; i <= m; ++i) {
            b.event("C[" + std::to_string(m) + "," + std::to_string(i) + "]", acc.C[m][i]);
        }
    }

    Rational sum_B{0}, sum_B_prime{0};
    for (int m = 2; m <= n; ++m) {
        sum_B += b.prob(acc.B[m]);
        sum_B_prime += b.prob(acc.B_prime[m]);
    }

    b.empty("B cells pairwise disjoint", acc.b_overlap);
    for (int m = 2; m <= n; ++m) {
        const std::string tag = "[" + std::to_string(m) + "]";
        b.empty("B" + tag + " within A and not A'", acc.b_outside[m]);
    }
    b.claim("sum of B at most P(A and not A')", sum_B, Relation::less_equal, b.prob(acc.A_not_A_prime));
    b.empty("A' and not A needs at least 2 on bus k+1", acc.gain_on_small_spare);
    for (int m = 2; m <= n; ++m) {
        const std::string tag = "[" + std::to_string(m) + "]";
        b.empty("B'" + tag + " contains A' and not A with X_{k+1}=" + std::to_string(m), acc.b_prime_missing[m]);
    }
    b.claim("B'[n] inclusion strict", b.prob(acc.gain_at[n]), Relation::less, b.prob(acc.B_prime[n]));
    for (int m = 2; m < n; ++m) {
        report.observations.emplace_back("B'[" + std::to_string(m) + "] inclusion strict",
                                         acc.gain_at[m].count < acc.B_prime[m].count);
    }
    b.claim("P(A' and not A) below sum of B'", b.prob(acc.A_prime_not_A), Relation::less, sum_B_prime);
    for (int m = 2; m <= n; ++m) {
        const std::string tag = std::to_string(m);
        for (int i = 2; i <= m; ++i) {
            b.claim("C[" + tag + "," + std::to_string(i) + "] equiprobable with C[" + tag + ",1]",
                    b.prob(acc.C[m][i]), Relation::equal, b.prob(acc.C[m][1]));
        }
        b.claim("B'[" + tag + "] at most m C[" + tag + ",1]", b.prob(acc.B_prime[m]), Relation::less_equal,
                Rational(m) * b.prob(acc.C[m][1]));
        b.claim("B[" + tag + "] equals m C[" + tag + ",1]", b.prob(acc.B[m]), Relation::equal,
                Rational(m) * b.prob(acc.C[m][1]));
        b.empty("bijection forward round-trip [" + tag + "]", acc.forward_fail[m]);
        b.empty("bijection backward round-trip [" + tag + "]", acc.backward_fail[m]);
    }
    b.claim("P(A and not A') > P(A' and not A)", b.prob(acc.A_not_A_prime), Relation::greater,
            b.prob(acc.A_prime_not_A));

    const Probability upper = tail_prob(n, k + 1, 1);
    const Probability lower = tail_prob(n, k, 1);
    b.claim("P(A) = p(n,k+1,1)", b.prob(acc.A), Relation::equal, upper.value());
    b.claim("P(A') = p(n,k,1)", b.prob(acc.A_prime), Relation::equal, lower.value());
    b.claim("coupling gap = p(n,k+1,1) - p(n,k,1)", b.prob(acc.A_not_A_prime) - b.prob(acc.A_prime_not_A),
            Relation::equal, upper.value() - lower.value());
    return report;
}

namespace detail {

struct MultiLonelyTally {
    Tally A, A_prime, A_not_A_prime, A_prime_not_A, D;
    Tally d_prime_overlap, gain_uncovered, d_outside, d_partition_fail;
    std::vector<Tally> D_prime, D_cell, e_union_fail, size_fail, image_fail, invert_fail;
    std::vector<std::vector<Tally>> E;
    std::vector<std::vector<std::uint64_t>> images;

    explicit MultiLonelyTally(const std::vector<std::vector<std::uint64_t>>& subsets)
        : D_prime(subsets.size()), D_cell(subsets.size()), e_union_fail(subsets.size()),
          size_fail(subsets.size()), image_fail(subsets.size()), invert_fail(subsets.size()),
          images(subsets.size())
    {
        for (const auto& s : subsets) E.emplace_back(s.size());
    }

    void merge(MultiLonelyTally&& o)
    {
        A.merge(o.A);
        A_prime.merge(o.A_prime);
        A_not_A_prime.merge(o.A_not_A_prime);
        A_prime_not_A.merge(o.A_prime_not_A);
        D.merge(o.D);
        d_prime_overlap.merge(o.d_prime_overlap);
        gain_uncovered.merge(o.gain_uncovered);
        d_outside.merge(o.d_outside);
        d_partition_fail.merge(o.d_partition_fail);
        merge_all(D_prime, o.D_prime);
        merge_all(D_cell, o.D_cell);
        merge_all(e_union_fail, o.e_union_fail);
        merge_all(size_fail, o.size_fail);
        merge_all(image_fail, o.image_fail);
        merge_all(invert_fail, o.invert_fail);
        for (std::size_t c = 0; c < E.size(); ++c) {
            merge_all(E[c], o.E[c]);
            images[c].insert(images[c].end(), o.images[c].begin(), o.images[c].end());
        }
    }
};

}  // namespace detail

inline VerificationReport verify_theorem2(int n, int k, int r, const EnumerationLimits& limits = {})
{
    const Params params{n, k, r};
    params.validate();
    if (r < 2) throw InputError("verify_theorem2 needs 2 <= r <= n");
    const ConfigurationSpace space(params);
    const std::uint64_t total = space.checked_size(limits.max_configurations);

    const auto cells = index_set_P(n, r);
    auto cell_index = [&](Cell c) {
        return static_cast<std::size_t>(std::lower_bound(cells.begin(), cells.end(), c) - cells.begin());
    };
    std::vector<std::vector<std::uint64_t>> subsets;  // per cell, increasing masks
    for (const Cell c : cells) {
        subsets.emplace_back();
        for_each_subset(c.m, r - c.l, [&](std::uint64_t s) { subsets.back().push_back(s); });
    }
    auto subset_rank = [&](std::size_t ci, std::uint64_t s) {
        const auto& v = subsets[ci];
        return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), s) - v.begin());
    };

    auto acc = reduce_configurations<detail::MultiLonelyTally>(
        params, limits, [&] { return detail::MultiLonelyTally(subsets); },
        [&](detail::MultiLonelyTally& t, const Configuration& c, std::uint64_t index) {
            const CouplingView v(c, k);
            const auto f = classify_theorem2(v, c, r, cells);
            const bool loses = f.in_A_r && !f.in_A_prime_r;
            const bool gains = f.in_A_prime_r && !f.in_A_r;
            if (f.in_A_r) t.A.hit(index);
            if (f.in_A_prime_r) t.A_prime.hit(index);
            if (loses) t.A_not_A_prime.hit(index);
            if (gains) {
                t.A_prime_not_A.hit(index);
                if (f.d_prime_cells == 0) t.gain_uncovered.hit(index);
            }
            if (f.d_prime_cells > 1) t.d_prime_overlap.hit(index);

            if (f.in_D) {
                t.D.hit(index);
                if (!loses) t.d_outside.hit(index);
                if (f.d_cells != 1) t.d_partition_fail.hit(index);
                else t.D_cell[cell_index(*f.d_cell)].hit(index);
            }

            if (!f.d_prime_cell) return;
            const Cell cell = *f.d_prime_cell;
            const std::size_t ci = cell_index(cell);
            t.D_prime[ci].hit(index);
            if (f.e_sets.empty()) t.e_union_fail[ci].hit(index);
            for (std::uint64_t s : f.e_sets) t.E[ci][subset_rank(ci, s)].hit(index);

            const std::uint64_t canonical = prefix_set(r - cell.l);
            if (std::find(f.e_sets.begin(), f.e_sets.end(), canonical) == f.e_sets.end()) return;
            const auto image = association_expand(c, cell, params);
            if (BigInt(image.size()) != association_multiplicity(cell, r)) t.size_fail[ci].hit(index);
            bool image_ok = true;
            bool invert_ok = true;
            for (const auto& tau : image) {
                const CouplingView vt(tau, k);
                if (!in_D_cell(vt, tau, r, cell)) image_ok = false;
                const auto back = association_invert(tau, cell, params);
                if (!back || *back != c) invert_ok = false;
                t.images[ci].push_back(space.encode(tau));
            }
            if (!image_ok) t.image_fail[ci].hit(index);
            if (!invert_ok) t.invert_fail[ci].hit(index);
        });

    VerificationReport report;
    report.theorem = 2;
    report.params = params;
    report.truncation_m = n;
    report.configurations = space.required_count();
    detail::ReportBuilder b(report, space, total);

    b.event("A_r", acc.A);
    b.event("A'_r", acc.A_prime);
    b.event("A_r and not A'_r", acc.A_not_A_prime);
    b.event("A'_r and not A_r", acc.A_prime_not_A);
    b.event("D", acc.D);
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell cell = cells[ci];
        b.event(detail::cell_name("D'", cell), acc.D_prime[ci]);
        for (std::size_t si = 0; si < subsets[ci].size(); ++si) {
            b.event("E[" + std::to_string(cell.m) + "," + std::to_string(cell.l) + "," +
                        detail::set_name(subsets[ci][si]) + "]",
                    acc.E[ci][si]);
        }
        b.event(detail::cell_name("D", cell), acc.D_cell[ci]);
    }

    Rational sum_D_prime{0}, sum_D_cells{0};
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        sum_D_prime += b.prob(acc.D_prime[ci]);
        sum_D_cells += b.prob(acc.D_cell[ci]);
    }

    b.empty("D' cells pairwise disjoint", acc.d_prime_overlap);
    b.empty("D' cells cover A'_r and not A_r", acc.gain_uncovered);
    b.claim("P(A'_r and not A_r) at most sum of D'", b.prob(acc.A_prime_not_A), Relation::less_equal, sum_D_prime);

    // Duplicate images across sources.
    detail::Tally duplicate_images;
    for (auto& imgs : acc.images) {
        std::sort(imgs.begin(), imgs.end());
        for (std::size_t i = 1; i < imgs.size(); ++i) {
            if (imgs[i] == imgs[i - 1]) duplicate_images.hit(imgs[i]);
        }
    }

    BinomialTable binom(static_cast<std::size_t>(n));
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell cell = cells[ci];
        const std::string tag = "[" + std::to_string(cell.m) + "," + std::to_string(cell.l) + "]";
        const std::size_t canonical = subset_rank(ci, prefix_set(r - cell.l));
        const Rational e0 = b.prob(acc.E[ci][canonical]);
        for (std::size_t si = 0; si < subsets[ci].size(); ++si) {
            if (si == canonical) continue;
            b.claim("E" + tag + " with S=" + detail::set_name(subsets[ci][si]) + " equiprobable with S=[r-l]",
                    b.prob(acc.E[ci][si]), Relation::equal, e0);
        }
        b.empty("E" + tag + " union over S equals D'" + tag, acc.e_union_fail[ci]);
        b.claim("D'" + tag + " at most C(m,r-l) E" + tag, b.prob(acc.D_prime[ci]), Relation::less_equal,
                Rational(binom(cell.m, r - cell.l)) * e0);
        b.empty("association size m!/(m+l-r)! " + tag, acc.size_fail[ci]);
        b.empty("association image within D" + tag, acc.image_fail[ci]);
        b.empty("association inverse round-trip " + tag, acc.invert_fail[ci]);
        b.claim("D" + tag + " at least m!/(m+l-r)! E" + tag, b.prob(acc.D_cell[ci]), Relation::greater_equal,
                Rational(association_multiplicity(cell, r)) * e0);

        if (acc.E[ci][canonical].count > 0) {
            if (cell.m + cell.l - r == 1) report.unit_branch_hit = true;
            else report.other_branch_hit = true;
        }
    }
    b.empty("association images disjoint across sources", duplicate_images);

    b.empty("D within A_r and not A'_r", acc.d_outside);
    b.empty("D cells partition D", acc.d_partition_fail);
    b.claim("sum of D cells equals P(D)", sum_D_cells, Relation::equal, b.prob(acc.D));
    b.claim("P(A_r and not A'_r) at least P(D)", b.prob(acc.A_not_A_prime), Relation::greater_equal, b.prob(acc.D));
    b.claim("P(A_r and not A'_r) >= P(A'_r and not A_r)", b.prob(acc.A_not_A_prime), Relation::greater_equal,
            b.prob(acc.A_prime_not_A));

    const Probability upper = tail_prob(n, k + 1, r);
    const Probability lower = tail_prob(n, k, r);
    b.claim("P(A_r) = p(n,k+1,r)", b.prob(acc.A), Relation::equal, upper.value());
    b.claim("P(A'_r) = p(n,k,r)", b.prob(acc.A_prime), Relation::equal, lower.value());
    b.claim("coupling gap = p(n,k+1,r) - p(n,k,r)", b.prob(acc.A_not_A_prime) - b.prob(acc.A_prime_not_A),
            Relation::equal, upper.value() - lower.value());
    return report;
}

}  // namespace lonelybus
