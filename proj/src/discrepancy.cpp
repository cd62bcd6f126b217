#include "qmc/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmc/quadrature.hpp"

namespace qmc {

namespace {

using u128 = unsigned __int128;

std::vector<double> point_values(const PointSet& p) {
    const int s = p.dim();
    std::vector<double> v(p.size() * s);
    for (std::size_t n = 0; n < p.size(); ++n)
        for (int j = 0; j < s; ++j) v[n * s + j] = p.value(n, j);
    return v;
}

} // namespace

LocalDiscrepancyEval local_discrepancy(const PointSet& p, std::span<const Rat64> anchor) {
    if (anchor.size() != static_cast<std::size_t>(p.dim()))
        throw UsageError("anchor dimension mismatch");
    for (const auto& a : anchor)
        if (a.den == 0 || a.num > a.den) throw UsageError("anchor coordinate outside [0,1]");

    std::uint64_t count = 0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        bool in = true;
        for (int j = 0; j < p.dim() && in; ++j)
            in = (u128)p.num(n, j) * anchor[j].den < (u128)anchor[j].num * p.denom(j);
        count += in;
    }
    LocalDiscrepancyEval e;
    e.anchor.assign(anchor.begin(), anchor.end());
    e.count = count;
    double vol = 1.0;
    for (const auto& a : anchor) vol *= a.value();
    e.value = p.size() ? static_cast<double>(count) / p.size() - vol : -vol;
    return e;
}

LocalDiscrepancyEval local_discrepancy(const PointSet& p, std::span<const double> anchor) {
    if (anchor.size() != static_cast<std::size_t>(p.dim()))
        throw UsageError("anchor dimension mismatch");
    std::uint64_t count = 0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        bool in = true;
        for (int j = 0; j < p.dim() && in; ++j) in = p.value(n, j) < anchor[j];
        count += in;
    }
    LocalDiscrepancyEval e;
    for (double a : anchor) {
        // nearest dyadic representation, for the record only
        e.anchor.push_back(Rat64{static_cast<std::uint64_t>(a * (1ull << 32)), 1ull << 32});
    }
    double vol = 1.0;
    for (double a : anchor) vol *= a;
    e.count = count;
    e.value = p.size() ? static_cast<double>(count) / p.size() - vol : -vol;
    return e;
}

namespace {

// Critical grid for the exact star discrepancy: per dimension the sorted
// distinct point values plus the sentinel 1.
struct StarGrid {
    int s = 0;
    std::size_t n = 0;
    std::vector<std::vector<std::uint64_t>> uniq; // numerators per dimension
    std::vector<std::uint64_t> den;               // per-dimension denominator
    std::vector<std::vector<double>> yv;          // corner values incl. sentinel
    std::vector<std::size_t> len;                 // uniq + 1
    std::vector<std::vector<std::uint32_t>> rank; // rank[j][n]

    explicit StarGrid(const PointSet& p) : s(p.dim()), n(p.size()) {
        uniq.resize(s);
        den.resize(s);
        yv.resize(s);
        len.resize(s);
        rank.assign(s, std::vector<std::uint32_t>(n));
        for (int j = 0; j < s; ++j) {
            den[j] = p.denom(j);
            auto& u = uniq[j];
            u.reserve(n);
            for (std::size_t i = 0; i < n; ++i) u.push_back(p.num(i, j));
            std::sort(u.begin(), u.end());
            u.erase(std::unique(u.begin(), u.end()), u.end());
            len[j] = u.size() + 1;
            yv[j].reserve(len[j]);
            for (auto q : u) yv[j].push_back(static_cast<double>(q) / den[j]);
            yv[j].push_back(1.0);
            for (std::size_t i = 0; i < n; ++i) {
                const auto it = std::lower_bound(u.begin(), u.end(), p.num(i, j));
                rank[j][i] = static_cast<std::uint32_t>(it - u.begin());
            }
        }
    }

    std::uint64_t corner_count() const {
        std::uint64_t c = 1;
        for (int j = 0; j < s; ++j) c *= len[j];
        return c;
    }
};

// One outer corner (indices for dims >= 1): best double value over the inner
// sweep, optionally collecting flat corner ids with value >= cutoff.
double sweep_outer(const StarGrid& g, std::uint64_t outer,
                   std::vector<std::uint32_t>& scratch_open,
                   std::vector<std::uint32_t>& scratch_closed,
                   double cutoff, std::vector<std::uint64_t>* sink) {
    const int s = g.s;
    const std::size_t n = g.n;
    std::size_t idx[16];
    {
        std::uint64_t rest = outer;
        for (int j = 1; j < s; ++j) {
            idx[j] = rest % g.len[j];
            rest /= g.len[j];
        }
    }
    double outer_vol = 1.0;
    for (int j = 1; j < s; ++j) outer_vol *= g.yv[j][idx[j]];

    const std::size_t l0 = g.len[0];
    auto& histO = scratch_open;
    auto& histC = scratch_closed;
    histO.assign(l0 + 1, 0);
    histC.assign(l0 + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bool open = true, closed = true;
        for (int j = 1; j < s && closed; ++j) {
            const std::uint32_t r = g.rank[j][i];
            if (r > idx[j]) { open = false; closed = false; }
            else if (r == idx[j] && idx[j] + 1 != g.len[j]) open = false; // equal, not sentinel
        }
        if (closed) {
            ++histC[g.rank[0][i]];
            if (open) ++histO[g.rank[0][i]];
        }
    }
    // prefix sums: A_open(i0) = #(r < i0), A_closed(i0) = #(r <= i0)
    std::uint32_t accO = 0, accC = 0;
    double best = -1.0;
    const double invn = 1.0 / static_cast<double>(n);
    for (std::size_t i0 = 0; i0 < l0; ++i0) {
        const double a_open = accO * invn;       // ranks < i0
        accC += histC[i0];
        accO += histO[i0];
        const double a_closed = accC * invn;     // ranks <= i0
        const double vol = outer_vol * g.yv[0][i0];
        const double v = std::max(vol - a_open, a_closed - vol);
        if (v > best) best = v;
        if (sink && v >= cutoff) sink->push_back(outer * l0 + i0);
    }
    return best;
}

// exact value of one corner: max(vol - A_open/N, A_closed/N - vol)
BigRat exact_corner(const PointSet& p, const StarGrid& g, std::uint64_t flat) {
    const int s = g.s;
    std::size_t idx[16];
    std::uint64_t rest = flat;
    for (int j = 0; j < s; ++j) {
        idx[j] = rest % g.len[j];
        rest /= g.len[j];
    }
    std::uint64_t a_open = 0, a_closed = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        bool open = true, closed = true;
        for (int j = 0; j < s && closed; ++j) {
            const bool sentinel = (idx[j] + 1 == g.len[j]);
            if (sentinel) continue; // x < 1 and x <= 1 always hold
            const std::uint64_t y = g.uniq[j][idx[j]];
            const std::uint64_t x = p.num(i, j);
            if (x > y) { open = false; closed = false; }
            else if (x == y) open = false;
        }
        a_open += open && closed;
        a_closed += closed;
    }
    BigRat vol(1);
    for (int j = 0; j < s; ++j) {
        const bool sentinel = (idx[j] + 1 == g.len[j]);
        vol *= sentinel ? BigRat(1) : make_rat(g.uniq[j][idx[j]], g.den[j]);
    }
    const BigRat n(static_cast<std::uint64_t>(g.n));
    const BigRat v1 = vol - BigRat(a_open) / n;
    const BigRat v2 = BigRat(a_closed) / n - vol;
    return std::max(v1, v2);
}

} // namespace

StarResult star_discrepancy_exact(const PointSet& p, Exec exec,
                                  std::uint64_t corner_guard) {
    if (p.size() == 0) throw UsageError("star discrepancy needs at least one point");
    if (p.dim() > 15) throw UsageError("star discrepancy limited to 15 dimensions");
    const StarGrid grid(p);
    const std::uint64_t corners = grid.corner_count();
    if (corners > corner_guard)
        throw ResourceError("critical grid has " + std::to_string(corners) +
                            " corners (> guard); use lp_quadrature / lp_monte_carlo "
                            "or the dense-grid estimate instead");

    std::uint64_t outer_total = 1;
    for (int j = 1; j < grid.s; ++j) outer_total *= grid.len[j];

    // pass 1: double screen for the maximum
    double best = -1.0;
    if (exec == Exec::serial) {
        std::vector<std::uint32_t> so, sc;
        for (std::uint64_t o = 0; o < outer_total; ++o)
            best = std::max(best, sweep_outer(grid, o, so, sc, 2.0, nullptr));
    } else {
#pragma omp parallel
        {
            std::vector<std::uint32_t> so, sc;
            double local = -1.0;
#pragma omp for schedule(static) nowait
            for (std::int64_t o = 0; o < static_cast<std::int64_t>(outer_total); ++o)
                local = std::max(local, sweep_outer(grid, o, so, sc, 2.0, nullptr));
#pragma omp critical
            best = std::max(best, local);
        }
    }

    // pass 2: collect candidates within slack of the screened maximum. The
    // double evaluation is accurate to ~1e-14 (counts are exact integers and
    // the volume product of <= s doubles keeps full precision), so 1e-9
    // cannot drop the true argmax.
    const double cutoff = best - 1e-9;
    std::vector<std::uint64_t> cand;
    if (exec == Exec::serial) {
        std::vector<std::uint32_t> so, sc;
        for (std::uint64_t o = 0; o < outer_total; ++o)
            sweep_outer(grid, o, so, sc, cutoff, &cand);
    } else {
#pragma omp parallel
        {
            std::vector<std::uint32_t> so, sc;
            std::vector<std::uint64_t> local;
#pragma omp for schedule(static) nowait
            for (std::int64_t o = 0; o < static_cast<std::int64_t>(outer_total); ++o)
                sweep_outer(grid, o, so, sc, cutoff, &local);
#pragma omp critical
            cand.insert(cand.end(), local.begin(), local.end());
        }
        std::sort(cand.begin(), cand.end());
    }

    StarResult r;
    r.corners = corners;
    BigRat bestx(-1);
    for (const auto flat : cand) {
        const BigRat v = exact_corner(p, grid, flat);
        if (v > bestx) bestx = v;
    }
    r.exact = bestx;
    r.value = to_double(bestx);
    return r;
}

double l2_warnock(const PointSet& p, Exec exec) {
    const int s = p.dim();
    const std::size_t n = p.size();
    if (n == 0) throw UsageError("l2_warnock needs at least one point");
    const auto x = point_values(p);

    std::vector<long double> row(n);
    auto compute_row = [&](std::size_t i) {
        const double* xi = &x[i * s];
        long double acc = 0.0L;
        for (std::size_t k = 0; k < n; ++k) {
            const double* xk = &x[k * s];
            double prod = 1.0;
            for (int j = 0; j < s; ++j) prod *= 1.0 - std::max(xi[j], xk[j]);
            acc += prod;
        }
        return acc;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
            row[i] = compute_row(i);
    } else {
        for (std::size_t i = 0; i < n; ++i) row[i] = compute_row(i);
    }

    long double pair_sum = 0.0L, mid_sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        pair_sum += row[i];
        double prod = 1.0;
        for (int j = 0; j < s; ++j) {
            const double v = x[i * s + j];
            prod *= (1.0 - v * v) / 2.0;
        }
        mid_sum += prod;
    }
    const long double nn = static_cast<long double>(n);
    long double l2sq = std::pow(3.0L, -static_cast<long double>(s)) -
                       2.0L / nn * mid_sum + pair_sum / (nn * nn);
    if (l2sq < 0.0L) l2sq = 0.0L;
    return static_cast<double>(std::sqrt(l2sq));
}

namespace {

// Cell decomposition for Lp quadrature: per-dimension breakpoints are the
// distinct point values with 0 and 1 added; the open-box count is constant on
// each cell product.
struct CellGrid {
    int s;
    std::vector<std::vector<double>> bp;    // breakpoint values
    std::vector<std::size_t> cells;         // per-dim cell count = bp.size()-1
    std::vector<std::uint32_t> count;       // dense cumulative counts
    std::uint64_t total = 1;

    CellGrid(const PointSet& p, std::uint64_t guard) : s(p.dim()) {
        const std::size_t n = p.size();
        bp.resize(s);
        cells.resize(s);
        std::vector<std::vector<std::uint64_t>> nums(s);
        for (int j = 0; j < s; ++j) {
            auto& u = nums[j];
            u.reserve(n + 2);
            u.push_back(0);
            for (std::size_t i = 0; i < n; ++i) u.push_back(p.num(i, j));
            std::sort(u.begin(), u.end());
            u.erase(std::unique(u.begin(), u.end()), u.end());
            u.push_back(p.denom(j)); // the value 1
            cells[j] = u.size() - 1;
            total *= cells[j];
            bp[j].reserve(u.size());
            for (auto q : u) bp[j].push_back(static_cast<double>(q) / p.denom(j));
        }
        if (total > guard)
            throw ResourceError("cell-exact Lp needs " + std::to_string(total) +
                                " cells (> guard); use lp_monte_carlo");
        count.assign(total, 0);
        // bin each point at its breakpoint rank, then cumulate per dimension
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t flat = 0;
            for (int j = 0; j < s; ++j) {
                const auto& u = nums[j];
                const std::size_t r =
                    std::lower_bound(u.begin(), u.end(), p.num(i, j)) - u.begin();
                flat = flat * cells[j] + r;
            }
            ++count[flat];
        }
        // cumulative sums along each dimension (innermost dim varies fastest)
        std::uint64_t stride = 1;
        for (int j = s - 1; j >= 0; --j) {
            const std::size_t cj = cells[j];
            const std::uint64_t block = stride * cj;
            for (std::uint64_t base = 0; base < total; base += block)
                for (std::uint64_t k = 1; k < cj; ++k)
                    for (std::uint64_t q = 0; q < stride; ++q)
                        count[base + k * stride + q] += count[base + (k - 1) * stride + q];
            stride = block;
        }
    }
};

// integral of |c/N - prod t|^p over one cell with a tensor Gauss rule
double cell_integral(const CellGrid& g, const GaussRule& rule,
                     const std::size_t* idx, double a, double pnorm) {
    const int s = g.s;
    const int q = static_cast<int>(rule.node.size());
    double lo[3], w[3];
    double nodes[3][64];
    for (int j = 0; j < s; ++j) {
        lo[j] = g.bp[j][idx[j]];
        const double hi = g.bp[j][idx[j] + 1];
        w[j] = hi - lo[j];
        for (int k = 0; k < q; ++k) nodes[j][k] = lo[j] + rule.node[k] * w[j];
    }
    double volw = 1.0;
    for (int j = 0; j < s; ++j) volw *= w[j];
    double acc = 0.0;
    if (s == 1) {
        for (int k = 0; k < q; ++k)
            acc += rule.weight[k] * std::pow(std::abs(a - nodes[0][k]), pnorm);
    } else if (s == 2) {
        for (int k1 = 0; k1 < q; ++k1)
            for (int k2 = 0; k2 < q; ++k2)
                acc += rule.weight[k1] * rule.weight[k2] *
                       std::pow(std::abs(a - nodes[0][k1] * nodes[1][k2]), pnorm);
    } else {
        for (int k1 = 0; k1 < q; ++k1)
            for (int k2 = 0; k2 < q; ++k2)
                for (int k3 = 0; k3 < q; ++k3)
                    acc += rule.weight[k1] * rule.weight[k2] * rule.weight[k3] *
                           std::pow(std::abs(a - nodes[0][k1] * nodes[1][k2] * nodes[2][k3]),
                                    pnorm);
    }
    return acc * volw;
}

double lp_total(const PointSet& p, const CellGrid& g, const GaussRule& rule,
                double pnorm, Exec exec) {
    const int s = g.s;
    const double invn = 1.0 / static_cast<double>(p.size());
    std::uint64_t outer_total = 1;
    for (int j = 0; j < s - 1; ++j) outer_total *= g.cells[j];
    const std::size_t inner = g.cells[s - 1];

    std::vector<long double> partial(outer_total);
    auto run_outer = [&](std::uint64_t o) {
        std::size_t idx[3] = {0, 0, 0};
        std::uint64_t rest = o;
        for (int j = s - 2; j >= 0; --j) {
            idx[j] = rest % g.cells[j];
            rest /= g.cells[j];
        }
        long double acc = 0.0L;
        const std::uint64_t base = o * inner;
        for (std::size_t k = 0; k < inner; ++k) {
            idx[s - 1] = k;
            const double a = g.count[base + k] * invn;
            acc += cell_integral(g, rule, idx, a, pnorm);
        }
        return acc;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t o = 0; o < static_cast<std::int64_t>(outer_total); ++o)
            partial[o] = run_outer(o);
    } else {
        for (std::uint64_t o = 0; o < outer_total; ++o) partial[o] = run_outer(o);
    }
    long double total = 0.0L;
    for (const auto v : partial) total += v;
    return static_cast<double>(total);
}

} // namespace

LpResult lp_quadrature(const PointSet& p, double pnorm, int order, Exec exec,
                       std::uint64_t cell_guard) {
    if (p.size() == 0) throw UsageError("lp_quadrature needs at least one point");
    if (std::isinf(pnorm)) {
        const auto star = star_discrepancy_exact(p, exec);
        LpResult r;
        r.value = star.value;
        r.p = pnorm;
        return r;
    }
    if (!(pnorm >= 1.0)) throw UsageError("Lp norm needs p >= 1");
    if (order < 1 || order > 64) throw UsageError("quadrature order must be in [1, 64]");
    if (p.dim() > 3)
        throw ResourceError("cell-exact Lp is limited to s <= 3; use lp_monte_carlo");

    const CellGrid grid(p, cell_guard);
    const GaussRule full = gauss_legendre(order);
    const GaussRule coarse = gauss_legendre(std::max(1, order - 2));
    const double tf = lp_total(p, grid, full, pnorm, exec);
    const double tc = lp_total(p, grid, coarse, pnorm, exec);

    LpResult r;
    r.p = pnorm;
    r.order = order;
    r.cells = grid.total;
    r.value = std::pow(tf, 1.0 / pnorm);
    r.refinement_delta = std::abs(r.value - std::pow(tc, 1.0 / pnorm));
    return r;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

LpResult lp_monte_carlo(const PointSet& p, double pnorm, std::uint64_t samples,
                        std::uint64_t seed, Exec exec) {
    if (p.size() == 0) throw UsageError("lp_monte_carlo needs at least one point");
    if (!(pnorm >= 1.0) || std::isinf(pnorm))
        throw UsageError("Monte Carlo Lp needs finite p >= 1");
    if (samples == 0) throw UsageError("lp_monte_carlo needs samples >= 1");
    const int s = p.dim();
    const std::size_t n = p.size();
    const auto x = point_values(p);

    std::vector<double> vals(samples);
    auto eval = [&](std::uint64_t i) {
        double t[64];
        double vol = 1.0;
        for (int j = 0; j < s; ++j) {
            const std::uint64_t h = splitmix64(seed ^ (i * 0x100000001b3ull + j));
            t[j] = static_cast<double>(h >> 11) * 0x1.0p-53;
            vol *= t[j];
        }
        std::uint64_t count = 0;
        for (std::size_t k = 0; k < n; ++k) {
            bool in = true;
            for (int j = 0; j < s && in; ++j) in = x[k * s + j] < t[j];
            count += in;
        }
        const double d = static_cast<double>(count) / n - vol;
        return std::pow(std::abs(d), pnorm);
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i)
            vals[i] = eval(i);
    } else {
        for (std::uint64_t i = 0; i < samples; ++i) vals[i] = eval(i);
    }
    long double sum = 0.0L, sumsq = 0.0L;
    for (const auto v : vals) {
        sum += v;
        sumsq += static_cast<long double>(v) * v;
    }
    const double mean = static_cast<double>(sum / samples);
    const double var =
        samples > 1 ? static_cast<double>((sumsq - sum * sum / samples) / (samples - 1)) : 0.0;
    const double se_mean = std::sqrt(std::max(var, 0.0) / samples);

    LpResult r;
    r.p = pnorm;
    r.monte_carlo = true;
    r.samples = samples;
    r.value = std::pow(mean, 1.0 / pnorm);
    // delta method on mean^(1/p)
    r.std_error = mean > 0 ? se_mean / (pnorm * std::pow(mean, 1.0 - 1.0 / pnorm)) : se_mean;
    return r;
}

double WeightSequence::product(const std::vector<int>& subset) const {
    double g = 1.0;
    for (int j : subset) g *= gamma.at(j);
    return g;
}

void WeightSequence::validate(int dim) const {
    if (static_cast<int>(gamma.size()) < dim)
        throw UsageError("weight sequence shorter than the dimension");
    for (int j = 0; j < dim; ++j)
        if (!(gamma[j] > 0.0)) throw UsageError("weights must be positive");
}

WeightedStarResult weighted_star(const PointSet& p, const WeightSequence& w, Exec exec,
                                 std::uint64_t corner_guard) {
    const int s = p.dim();
    if (s > 12) throw ResourceError("weighted star discrepancy limited to s <= 12");
    w.validate(s);

    // total corner work over all projections, against the guard
    std::vector<std::uint64_t> len(s);
    for (int j = 0; j < s; ++j) {
        std::vector<std::uint64_t> u;
        u.reserve(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) u.push_back(p.num(i, j));
        std::sort(u.begin(), u.end());
        len[j] = std::unique(u.begin(), u.end()) - u.begin() + 1;
    }
    std::uint64_t work = 0;
    for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
        std::uint64_t c = 1;
        for (int j = 0; j < s; ++j)
            if (mask & (1u << j)) c *= len[j];
        if (c > corner_guard - work)
            throw ResourceError("weighted star subset enumeration exceeds the corner guard");
        work += c;
    }

    WeightedStarResult best;
    BigRat bestval(-1);
    for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
        std::vector<int> subset;
        for (int j = 0; j < s; ++j)
            if (mask & (1u << j)) subset.push_back(j);
        const auto proj = p.project(subset);
        const auto star = star_discrepancy_exact(proj, exec, corner_guard);
        BigRat g(1);
        for (int j : subset) g *= BigRat(w.gamma[j]); // doubles converted exactly
        const BigRat cand = g * star.exact;
        if (cand >= bestval) { // ties go to the later (larger) subset
            bestval = cand;
            best.argmax_subset = subset;
        }
    }
    best.exact = bestval;
    best.value = to_double(bestval);
    return best;
}

std::uint64_t digit_sum(std::uint64_t n, std::uint32_t b) {
    if (b < 2) throw UsageError("digit sum needs base >= 2");
    std::uint64_t s = 0;
    while (n) {
        s += n % b;
        n /= b;
    }
    return s;
}

BoundValues bound_helpers(std::uint64_t n, std::uint32_t b) {
    if (n < 1) throw UsageError("bound helpers need N >= 1");
    BoundValues v;
    v.bejian_faure = std::log(static_cast<double>(n)) / (3.0 * std::log(2.0)) + 1.0;
    v.sod = digit_sum(n, b);
    v.sod_bound = static_cast<double>(digit_sum(n, 2)) / static_cast<double>(n);
    return v;
}

} // namespace qmc
