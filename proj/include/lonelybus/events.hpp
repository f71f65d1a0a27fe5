#pragma once

// Pointwise membership of a configuration in the events used by the
// coupling arguments: A, A', B_m, B'_m, C_{m,i} for the single-lonely
// case and A_r, A'_r, D'_{m,l}, E_{m,l,S}, D, D_{m,l} for the r-lonely case.
//
// Every event indexed by a cell is evaluated by its own predicate, so
// disjointness and partition properties can be checked rather than assumed.

#include "lonelybus/model.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace lonelybus {

/// Loads before and after reassignment, with 1-based accessors.
class CouplingView {
public:
    CouplingView(const Configuration& c, int k) : k_(k), before_(k + 2, 0), after_(k + 1, 0)
    {
        for (int bus : c.assignment) ++before_[bus];
        int used = 0;
        for (int bus : c.assignment) ++after_[bus == k + 1 ? c.targets[used++] : bus];
        for (int i = 1; i <= k; ++i) {
            if (before_[i] == 1) ++lonely_front_;
            if (after_[i] == 1) ++lonely_after_;
        }
    }

    int k() const { return k_; }
    int before(int bus) const { return before_[bus]; }
    int after(int bus) const { return after_[bus]; }
    int on_spare() const { return before_[k_ + 1]; }
    // singleton buses among 1..k before reassignment
    int lonely_front() const { return lonely_front_; }
    int lonely_before() const { return lonely_front_ + (on_spare() == 1 ? 1 : 0); }
    int lonely_after() const { return lonely_after_; }

private:
    int k_;
    std::vector<int> before_;
    std::vector<int> after_;
    int lonely_front_ = 0;
    int lonely_after_ = 0;
};

// ---------------------------------------------------------------------------
// Single-lonely events

inline bool in_B(const CouplingView& v, const Configuration& c, int m)
{
    if (m < 2 || v.on_spare() != 1) return false;
    const int y1 = c.target(1);
    if (v.before(y1) != m - 1) return false;
    for (int i = 1; i <= v.k(); ++i) {
        if (i != y1 && v.before(i) == 1) return false;
    }
    return true;
}

inline bool in_B_prime(const CouplingView& v, const Configuration& c, int m)
{
    if (m < 2 || v.on_spare() != m || v.lonely_front() != 0) return false;
    for (int j = 1; j <= m; ++j) {
        if (v.before(c.target(j)) == 0) return true;
    }
    return false;
}

inline bool in_C(const CouplingView& v, const Configuration& c, int m, int i)
{
    return i >= 1 && i <= m && in_B_prime(v, c, m) && v.before(c.target(i)) == 0;
}

struct EventFlagsT1 {
    bool in_A = false;
    bool in_A_prime = false;
    std::optional<int> m_if_B;
    std::optional<int> m_if_B_prime;
    std::vector<int> c_witnesses;  // i with the configuration in C_{m,i}
    int b_cells = 0;               // number of m with B_m true; at most 1
    int b_prime_cells = 0;
};

inline EventFlagsT1 classify_theorem1(const CouplingView& v, const Configuration& c, int n)
{
    EventFlagsT1 f;
    f.in_A = v.lonely_before() > 0;
    f.in_A_prime = v.lonely_after() > 0;
    for (int m = 2; m <= n; ++m) {
        if (in_B(v, c, m)) {
            ++f.b_cells;
            if (!f.m_if_B) f.m_if_B = m;
        }
        if (in_B_prime(v, c, m)) {
            ++f.b_prime_cells;
            if (!f.m_if_B_prime) f.m_if_B_prime = m;
        }
    }
    if (f.m_if_B_prime) {
        for (int i = 1; i <= *f.m_if_B_prime; ++i) {
            if (in_C(v, c, *f.m_if_B_prime, i)) f.c_witnesses.push_back(i);
        }
    }
    return f;
}

inline EventFlagsT1 classify_theorem1(const Configuration& c, const Params& p)
{
    p.validate();
    validate(c, p);
    return classify_theorem1(CouplingView(c, p.k), c, p.n);
}

// ---------------------------------------------------------------------------
// r-lonely events

struct Cell {
    int m = 0;
    int l = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// {(m, l) : 2 <= m <= n, l >= 0, 0 < r - l <= m}, ordered by (m, l).
inline std::vector<Cell> index_set_P(int n, int r)
{
    if (r < 2 || r > n) throw InputError("index set needs 2 <= r <= n");
    std::vector<Cell> cells;
    for (int m = 2; m <= n; ++m) {
        for (int l = std::max(0, r - m); l <= r - 1; ++l) cells.push_back({m, l});
    }
    return cells;
}

inline bool in_index_set(Cell cell, int r)
{
    return cell.m >= 2 && cell.l >= 0 && r - cell.l > 0 && r - cell.l <= cell.m;
}

/// Minimum j in 1..n with X_{Y_j} != 1, or 0 when every target is a singleton bus.
inline int first_nonlonely_index(const CouplingView& v, const Configuration& c)
{
    for (int j = 1; j <= c.size(); ++j) {
        if (v.before(c.target(j)) != 1) return j;
    }
    return 0;
}

inline int first_nonlonely_index(const Configuration& c, const Params& p)
{
    p.validate();
    validate(c, p);
    return first_nonlonely_index(CouplingView(c, p.k), c);
}

/// How many j <= m have Y_j == bus.
inline int hits_among_first(const Configuration& c, int m, int bus)
{
    int hits = 0;
    for (int j = 1; j <= m; ++j) hits += (c.target(j) == bus) ? 1 : 0;
    return hits;
}

/// Empty buses s <= k receiving exactly one of the first m targets.
inline int fresh_singletons(const CouplingView& v, const Configuration& c, int m)
{
    int count = 0;
    for (int s = 1; s <= v.k(); ++s) {
        if (v.before(s) == 0 && hits_among_first(c, m, s) == 1) ++count;
    }
    return count;
}

inline bool in_D_prime(const CouplingView& v, const Configuration& c, int r, Cell cell)
{
    if (!in_index_set(cell, r)) return false;
    if (v.on_spare() != cell.m || v.lonely_front() != cell.l) return false;
    const int need = r - cell.l;
    const int have = fresh_singletons(v, c, cell.m);
    if (have < need) return false;
    if (have == need) {
        for (int j = 1; j <= cell.m; ++j) {
            if (v.before(c.target(j)) == 1) return false;
        }
    }
    return true;
}

/// S is a bitmask over target indices 1..m (bit j-1 for index j).
inline bool in_E(const CouplingView& v, const Configuration& c, int r, Cell cell, std::uint64_t subset)
{
    if (std::popcount(subset) != r - cell.l) return false;
    if (cell.m < 64 && (subset >> cell.m) != 0) return false;
    if (!in_D_prime(v, c, r, cell)) return false;
    for (int j = 1; j <= cell.m; ++j) {
        if (!(subset >> (j - 1) & 1)) continue;
        const int bus = c.target(j);
        if (v.before(bus) != 0 || hits_among_first(c, cell.m, bus) != 1) return false;
    }
    return true;
}

/// The bitmask of {1, ..., size}.
inline std::uint64_t prefix_set(int size) { return size >= 64 ? ~0ull : ((1ull << size) - 1); }

inline bool in_D(const CouplingView& v, const Configuration& c, int r)
{
    if (v.on_spare() != 1) return false;
    if (v.lonely_front() != r - 1 && v.lonely_front() != r) return false;
    const int J = first_nonlonely_index(v, c);
    if (J <= 1) return false;
    for (int j = 1; j < J; ++j) {
        for (int jj = j + 1; jj < J; ++jj) {
            if (c.target(j) == c.target(jj)) return false;
        }
    }
    return true;
}

inline bool in_D_cell(const CouplingView& v, const Configuration& c, int r, Cell cell)
{
    if (!in_D(v, c, r)) return false;
    const int J = first_nonlonely_index(v, c);
    if (v.lonely_front() == r - 1) {
        return J + v.before(c.target(J)) == cell.m && r - J == cell.l;
    }
    return J == cell.m && r - J + 1 == cell.l;
}

/// Calls fn(mask) for every subset of {1..m} with `size` elements, in
/// increasing numeric order of the mask.
template <class Fn>
void for_each_subset(int m, int size, Fn&& fn)
{
    if (size < 0 || size > m) return;
    if (size == 0) {
        fn(std::uint64_t{0});
        return;
    }
    const std::uint64_t limit = prefix_set(m);
    std::uint64_t s = prefix_set(size);
    while (true) {
        fn(s);
        // Gosper's hack: next mask with the same popcount
        const std::uint64_t low = s & (~s + 1);
        const std::uint64_t ripple = s + low;
        if (ripple == 0 || ripple > limit) break;
        s = ripple | (((s ^ ripple) >> 2) / low);
        if (s > limit) break;
    }
}

struct EventFlagsT2 {
    bool in_A_r = false;
    bool in_A_prime_r = false;
    std::optional<Cell> d_prime_cell;
    std::vector<std::uint64_t> e_sets;  // masks S with E_{m,l,S}
    bool in_D = false;
    std::optional<Cell> d_cell;
    int j_value = 0;
    int d_prime_cells = 0;  // cells whose D' predicate holds; at most 1
    int d_cells = 0;        // cells whose D predicate holds; exactly 1 iff in_D
};

inline EventFlagsT2 classify_theorem2(const CouplingView& v, const Configuration& c, int r,
                                      const std::vector<Cell>& cells)
{
    EventFlagsT2 f;
    f.in_A_r = v.lonely_before() >= r;
    f.in_A_prime_r = v.lonely_after() >= r;
    f.j_value = first_nonlonely_index(v, c);
    f.in_D = in_D(v, c, r);
    for (const Cell cell : cells) {
        if (in_D_prime(v, c, r, cell)) {
            ++f.d_prime_cells;
            if (!f.d_prime_cell) {
                f.d_prime_cell = cell;
                for_each_subset(cell.m, r - cell.l, [&](std::uint64_t s) {
                    if (in_E(v, c, r, cell, s)) f.e_sets.push_back(s);
                });
            }
        }
        if (f.in_D && in_D_cell(v, c, r, cell)) {
            ++f.d_cells;
            if (!f.d_cell) f.d_cell = cell;
        }
    }
    return f;
}

inline EventFlagsT2 classify_theorem2(const Configuration& c, const Params& p)
{
    p.validate();
    validate(c, p);
    const int r = p.threshold();
    if (r < 2) throw InputError("the r-lonely events need r >= 2");
    return classify_theorem2(CouplingView(c, p.k), c, r, index_set_P(p.n, r));
}

/// Subset as sorted 1-based indices.
inline std::vector<int> subset_members(std::uint64_t mask)
{
    std::vector<int> out;
    for (int j = 1; mask; ++j, mask >>= 1) {
        if (mask & 1) out.push_back(j);
    }
    return out;
}

}  // namespace lonelybus
