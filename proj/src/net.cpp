#include "qmc/net.hpp"

#include <algorithm>
#include <atomic>

namespace qmc {

std::vector<std::vector<int>> compositions(int w, int s) {
    if (w < 0 || s < 1) throw UsageError("compositions need w >= 0, s >= 1");
    std::vector<std::vector<int>> out;
    std::vector<int> d(s, 0);
    d[0] = w;
    while (true) {
        out.push_back(d);
        // colex successor: move one unit from the leftmost positive part rightwards
        int j = 0;
        while (j < s && d[j] == 0) ++j;
        if (j >= s - 1) break;
        const int v = d[j];
        d[j] = 0;
        d[0] = v - 1;
        d[j + 1] += 1;
    }
    return out;
}

namespace {

// rank condition for one composition: stacked first d_j rows of C_j(m)
bool composition_ok(const GeneratorSet& g, int m, const std::vector<int>& d) {
    std::vector<std::vector<std::uint32_t>> rows;
    int total = 0;
    for (int j = 0; j < g.dim(); ++j) {
        for (int r = 0; r < d[j]; ++r) {
            std::vector<std::uint32_t> row(m);
            for (int c = 0; c < m; ++c)
                row[c] = g.matrix(j).at(static_cast<std::size_t>(r),
                                        static_cast<std::size_t>(c));
            rows.push_back(std::move(row));
        }
        total += d[j];
    }
    return rank_of_rows(std::move(rows), m, g.base()) == static_cast<std::size_t>(total);
}

// colex index of the first failing composition, or SIZE_MAX if all pass
std::size_t first_failure(const GeneratorSet& g, int m,
                          const std::vector<std::vector<int>>& comps, Exec exec) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < comps.size(); ++i)
            if (!composition_ok(g, m, comps[i])) return i;
        return SIZE_MAX;
    }
    std::atomic<std::size_t> first{SIZE_MAX};
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(comps.size()); ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        if (idx > first.load(std::memory_order_relaxed)) continue;
        if (!composition_ok(g, m, comps[idx])) {
            std::size_t cur = first.load(std::memory_order_relaxed);
            while (idx < cur && !first.compare_exchange_weak(cur, idx)) {}
        }
    }
    return first.load();
}

} // namespace

TValueEntry t_value_at_m(const GeneratorSet& g, int m, Exec exec) {
    if (m < 1) throw UsageError("t_value_at_m needs m >= 1");
    if (m > g.in_digits())
        throw PrecisionError("m = " + std::to_string(m) + " exceeds stored precision " +
                             std::to_string(g.in_digits()));
    std::optional<std::vector<int>> witness;
    for (int t = 0; t <= m; ++t) {
        const auto comps = compositions(m - t, g.dim());
        const std::size_t fail = first_failure(g, m, comps, exec);
        if (fail == SIZE_MAX) return {m, t, witness};
        witness = comps[fail];
    }
    // t = m always passes (empty row set has rank 0)
    return {m, m, witness};
}

TValueReport exact_t(const GeneratorSet& g, int m_max, Exec exec) {
    TValueReport rep;
    rep.m_max = m_max;
    for (int m = 1; m <= m_max; ++m) {
        rep.rows.push_back(t_value_at_m(g, m, exec));
        rep.t_star = std::max(rep.t_star, rep.rows.back().t);
    }
    return rep;
}

namespace {

std::optional<NetViolation> check_composition_counts(const PointSet& p, int t,
                                                     const std::vector<int>& d) {
    const std::uint32_t b = p.base();
    const int s = p.dim();
    const int prec = p.precision();
    std::uint64_t ncells = 1;
    for (int j = 0; j < s; ++j) ncells *= checked_pow(b, d[j]);
    std::vector<std::uint64_t> counts(ncells, 0);
    for (std::size_t n = 0; n < p.size(); ++n) {
        std::uint64_t idx = 0;
        for (int j = 0; j < s; ++j) {
            const std::uint64_t cell = p.num(n, j) / checked_pow(b, prec - d[j]);
            idx = idx * checked_pow(b, d[j]) + cell;
        }
        ++counts[idx];
    }
    const std::uint64_t expected = checked_pow(b, t);
    for (std::uint64_t idx = 0; idx < ncells; ++idx) {
        if (counts[idx] == expected) continue;
        NetViolation v;
        v.shape = d;
        v.count = counts[idx];
        v.expected = expected;
        v.cell.assign(s, 0);
        std::uint64_t rest = idx;
        for (int j = s - 1; j >= 0; --j) {
            const std::uint64_t width = checked_pow(b, d[j]);
            v.cell[j] = rest % width;
            rest /= width;
        }
        return v;
    }
    return std::nullopt;
}

} // namespace

NetCheckResult verify_net(const PointSet& p, int t, int m, Exec exec) {
    if (p.base() == 0)
        throw UsageError("verify_net needs a digital point set with a uniform base");
    if (t < 0 || t > m) throw UsageError("verify_net needs 0 <= t <= m");
    if (p.precision() < m)
        throw PrecisionError("verify_net needs coordinate precision >= m");
    if (p.size() != checked_pow(p.base(), m))
        throw UsageError("verify_net needs exactly b^m points, got " +
                         std::to_string(p.size()));

    const auto comps = compositions(m - t, p.dim());
    NetCheckResult result;
    result.ok = true;

    if (exec == Exec::serial) {
        for (const auto& d : comps) {
            if (auto v = check_composition_counts(p, t, d)) {
                result.ok = false;
                result.violation = std::move(v);
                return result;
            }
        }
        return result;
    }

    std::atomic<std::size_t> first{SIZE_MAX};
    std::vector<std::optional<NetViolation>> found(comps.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(comps.size()); ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        if (idx > first.load(std::memory_order_relaxed)) continue;
        if (auto v = check_composition_counts(p, t, comps[idx])) {
            found[idx] = std::move(v);
            std::size_t cur = first.load(std::memory_order_relaxed);
            while (idx < cur && !first.compare_exchange_weak(cur, idx)) {}
        }
    }
    const std::size_t idx = first.load();
    if (idx != SIZE_MAX) {
        result.ok = false;
        result.violation = std::move(found[idx]);
    }
    return result;
}

BlockScanResult block_net_scan(const GeneratorSet& g, int m, int k_max,
                               std::optional<int> t, Exec exec) {
    if (m < 1 || k_max < 0) throw UsageError("block_net_scan needs m >= 1, k_max >= 0");
    BlockScanResult r;
    r.m = m;
    r.t = t ? *t : exact_t(g, m, exec).t_star;
    const std::uint64_t bm = checked_pow(g.base(), m);
    for (int k = 0; k <= k_max; ++k) {
        const PointSet block = g.block(static_cast<std::uint64_t>(k) * bm, bm, exec);
        r.blocks.push_back(verify_net(block, r.t, m, exec));
    }
    return r;
}

namespace {

struct PairKey {
    int exponent;
    std::uint64_t n, k;
    bool zero_coordinate; // some coordinate difference was exactly 0

    // ordering: non-admissible pairs first, then smaller exponent, then (n, k)
    bool better_than(const PairKey& o) const {
        if (zero_coordinate != o.zero_coordinate) return zero_coordinate;
        if (exponent != o.exponent) return exponent < o.exponent;
        if (n != o.n) return n < o.n;
        return k < o.k;
    }
};

// floor(log_b .) exponent of the digitwise b-adic difference of indices
int index_diff_exponent(std::uint64_t n, std::uint64_t k, std::uint32_t b) {
    int top = -1, i = 0;
    while (n || k) {
        const std::uint32_t dn = static_cast<std::uint32_t>(n % b);
        const std::uint32_t dk = static_cast<std::uint32_t>(k % b);
        if ((dn + b - dk) % b != 0) top = i;
        n /= b;
        k /= b;
        ++i;
    }
    return top; // -1 means identical digit strings
}

// position (1-based, from the most significant fractional digit) of the first
// nonzero digit of x_n - x_k in coordinate j; 0 if the difference is zero
int coord_diff_position(const PointSet& p, std::size_t n, std::size_t k, int j) {
    const std::uint32_t b = p.base();
    std::uint64_t an = p.num(n, j), ak = p.num(k, j);
    std::uint64_t scale = p.denom(j);
    for (int i = 1; i <= p.precision(); ++i) {
        scale /= b;
        const std::uint32_t dn = static_cast<std::uint32_t>(an / scale % b);
        const std::uint32_t dk = static_cast<std::uint32_t>(ak / scale % b);
        if ((dn + b - dk) % b != 0) return i;
    }
    return 0;
}

PairKey evaluate_pair(const PointSet& p, std::uint64_t n, std::uint64_t k) {
    PairKey key{0, n, k, false};
    key.exponent = index_diff_exponent(n, k, p.base());
    for (int j = 0; j < p.dim(); ++j) {
        const int pos = coord_diff_position(p, n, k, j);
        if (pos == 0) {
            key.zero_coordinate = true;
            return key;
        }
        key.exponent -= pos;
    }
    return key;
}

} // namespace

AdmissibilityReport d_admissibility(const PointSet& p, std::uint64_t n, Exec exec) {
    if (p.base() == 0)
        throw UsageError("d_admissibility needs a digital point set with a uniform base");
    if (n > p.size()) throw UsageError("d_admissibility prefix exceeds point set");
    AdmissibilityReport rep;
    rep.n_points = n;
    if (n < 2) {
        rep.admissible = true;
        return rep;
    }

    PairKey best{0, 0, 0, false};
    bool have = false;
    if (exec == Exec::serial) {
        for (std::uint64_t i = 1; i < n; ++i)
            for (std::uint64_t k = 0; k < i; ++k) {
                const PairKey key = evaluate_pair(p, i, k);
                if (!have || key.better_than(best)) { best = key; have = true; }
            }
    } else {
#pragma omp parallel
        {
            PairKey local{0, 0, 0, false};
            bool lhave = false;
#pragma omp for schedule(dynamic, 16) nowait
            for (std::int64_t i = 1; i < static_cast<std::int64_t>(n); ++i)
                for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(i); ++k) {
                    const PairKey key = evaluate_pair(p, i, k);
                    if (!lhave || key.better_than(local)) { local = key; lhave = true; }
                }
#pragma omp critical
            if (lhave && (!have || local.better_than(best))) { best = local; have = true; }
        }
    }

    rep.pair_n = best.n;
    rep.pair_k = best.k;
    if (best.zero_coordinate) {
        rep.admissible = false; // infimum 0: no finite d works
        rep.min_exponent = 0;
        rep.d_empirical = 0;
    } else {
        rep.admissible = true;
        rep.min_exponent = best.exponent;
        rep.d_empirical = -best.exponent;
    }
    return rep;
}

} // namespace qmc
