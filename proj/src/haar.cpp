#include "qmc/haar.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qmc/discrepancy.hpp"

namespace qmc {

void HaarIndex::validate() const {
    if (level.empty() || level.size() != shift.size())
        throw UsageError("Haar index: level/shift size mismatch");
    for (std::size_t l = 0; l < level.size(); ++l) {
        if (level[l] < -1) throw UsageError("Haar index: level must be >= -1");
        if (level[l] == -1) {
            if (shift[l] != 0) throw UsageError("Haar index: shift must be 0 at level -1");
        } else {
            if (level[l] > 62) throw UsageError("Haar index: level too large");
            if (shift[l] < 0 || shift[l] >= (std::int64_t{1} << level[l]))
                throw UsageError("Haar index: shift out of range for level");
        }
    }
}

int HaarIndex::abs_level() const {
    int a = 0;
    for (int j : level) a += std::max(j, 0);
    return a;
}

namespace {

using u128 = unsigned __int128;

// phi(x; j, m) = integral of h_{j,m} over (x, 1]: piecewise linear, supported
// on the dyadic cell of h
double phi(double x, int j, std::int64_t m) {
    if (j == -1) return 1.0 - x;
    const double delta = std::ldexp(1.0, -j);
    const double a = static_cast<double>(m) * delta;
    if (x < a || x >= a + delta) return 0.0;
    if (x < a + 0.5 * delta) return a - x;
    return -(a + delta - x);
}

// psi(j) = integral of t * h_{j,m}(t) dt (shift-independent for j >= 0)
double psi(int j) { return j == -1 ? 0.5 : -std::ldexp(1.0, -2 * j - 2); }

bool power_of_two(std::uint64_t v) { return v && (v & (v - 1)) == 0; }

BigRat phi_exact(std::uint64_t num, std::uint64_t den, int j, std::int64_t m) {
    const BigRat x = make_rat(num, den);
    if (j == -1) return BigRat(1) - x;
    const BigRat delta = BigRat(1) / BigRat(BigInt(1) << j);
    const BigRat a = BigRat(m) * delta;
    if (x < a || x >= a + delta) return BigRat(0);
    if (x < a + delta / 2) return a - x;
    return -(a + delta - x);
}

BigRat psi_exact(int j) {
    if (j == -1) return BigRat(1, 2);
    return -BigRat(1) / BigRat(BigInt(1) << (2 * j + 2));
}

// dyadic cell of x = num/den at level j >= 0: floor(x * 2^j), exact
std::uint64_t dyadic_cell(std::uint64_t num, std::uint64_t den, int j) {
    return static_cast<std::uint64_t>(((u128)num << j) / den);
}

} // namespace

double haar_coefficient_value(const PointSet& p, const HaarIndex& idx) {
    idx.validate();
    if (idx.level.size() != static_cast<std::size_t>(p.dim()))
        throw UsageError("Haar index dimension mismatch");
    const int s = p.dim();
    double sum = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        double prod = 1.0;
        for (int l = 0; l < s && prod != 0.0; ++l)
            prod *= phi(p.value(n, l), idx.level[l], idx.shift[l]);
        sum += prod;
    }
    double vol = 1.0;
    for (int l = 0; l < s; ++l) vol *= psi(idx.level[l]);
    return sum / static_cast<double>(p.size()) - vol;
}

HaarCoefficient haar_coefficient(const PointSet& p, const HaarIndex& idx,
                                 HaarNormalization norm) {
    HaarCoefficient c;
    c.index = idx;
    c.value = haar_coefficient_value(p, idx);

    bool dyadic = true;
    for (int j = 0; j < p.dim(); ++j) dyadic = dyadic && power_of_two(p.denom(j));
    if (dyadic && norm == HaarNormalization::linf) {
        BigRat sum(0);
        for (std::size_t n = 0; n < p.size(); ++n) {
            BigRat prod(1);
            for (int l = 0; l < p.dim() && prod != 0; ++l)
                prod *= phi_exact(p.num(n, l), p.denom(l), idx.level[l], idx.shift[l]);
            sum += prod;
        }
        BigRat vol(1);
        for (int l = 0; l < p.dim(); ++l) vol *= psi_exact(idx.level[l]);
        c.exact = sum / BigRat(static_cast<std::uint64_t>(p.size())) - vol;
    }
    if (norm == HaarNormalization::l2) {
        // 2^{|j|/2} rescaling; irrational for odd |j|, so no exact value
        c.value *= std::exp2(0.5 * idx.abs_level());
    }
    return c;
}

namespace {

// all level vectors with components in {j_min, ..., j_max}, odometer order
std::vector<std::vector<int>> level_vectors(int s, int j_min, int j_max) {
    std::vector<std::vector<int>> out;
    std::vector<int> j(s, j_min);
    while (true) {
        out.push_back(j);
        int l = 0;
        while (l < s && j[l] == j_max) j[l++] = j_min;
        if (l == s) break;
        ++j[l];
    }
    return out;
}

struct LevelCells {
    // support cells holding at least one point: packed shifts -> counting sum
    std::vector<std::pair<std::uint64_t, double>> nonempty;
    double vol_term = 1.0;     // product of psi over dimensions (signed)
    double empty_abs = 0.0;    // |coefficient| of a cell without points
    std::uint64_t total_cells = 1;
    int abs_level = 0;
};

// Per-cell counting sums for one level vector. The shift vector of a cell is
// packed into one 64-bit key (levels sum <= 62 checked by callers).
LevelCells analyze_level(const PointSet& p, const std::vector<int>& j) {
    const int s = p.dim();
    LevelCells out;
    for (int l = 0; l < s; ++l) {
        out.vol_term *= psi(j[l]);
        if (j[l] >= 0) {
            out.total_cells <<= j[l];
            out.abs_level += j[l];
        }
    }
    out.empty_abs = std::abs(out.vol_term);
    std::map<std::uint64_t, double> acc; // ordered keys: deterministic sums
    for (std::size_t n = 0; n < p.size(); ++n) {
        std::uint64_t key = 0;
        double prod = 1.0;
        for (int l = 0; l < s; ++l) {
            if (j[l] >= 0) {
                const std::uint64_t cell = dyadic_cell(p.num(n, l), p.denom(l), j[l]);
                key = (key << j[l]) | cell;
                prod *= phi(p.value(n, l), j[l], static_cast<std::int64_t>(cell));
            } else {
                prod *= 1.0 - p.value(n, l);
            }
        }
        acc[key] += prod;
    }
    out.nonempty.assign(acc.begin(), acc.end());
    return out;
}

void check_level_budget(const PointSet& p, int j_max) {
    if (j_max < 0) throw UsageError("level cap must be >= 0");
    if (static_cast<std::int64_t>(j_max) * p.dim() > 62)
        throw ResourceError("level cap times dimension exceeds the 62-bit shift budget");
}

} // namespace

LittlewoodPaleyResult littlewood_paley_rhs(const PointSet& p, double pnorm, int j_max,
                                           Exec exec) {
    if (!(pnorm > 1.0)) throw DomainError("Littlewood-Paley bound needs p > 1");
    if (p.size() == 0) throw UsageError("littlewood_paley_rhs needs points");
    check_level_budget(p, j_max);

    const double pbar = std::max(pnorm, 2.0);
    const auto levels = level_vectors(p.dim(), -1, j_max);
    const double invn = 1.0 / static_cast<double>(p.size());

    std::vector<double> term(levels.size());
    auto compute = [&](std::size_t i) {
        const auto cells = analyze_level(p, levels[i]);
        long double sum = 0.0L;
        for (const auto& [key, cnt] : cells.nonempty) {
            (void)key;
            const double coef = cnt * invn - cells.vol_term;
            sum += std::pow(std::abs(coef), pbar);
        }
        const std::uint64_t empty = cells.total_cells - cells.nonempty.size();
        if (empty > 0 && cells.empty_abs > 0.0)
            sum += static_cast<long double>(empty) * std::pow(cells.empty_abs, pbar);
        const double shell = std::pow(static_cast<double>(sum), 2.0 / pbar);
        return std::exp2(2.0 * cells.abs_level * (1.0 - 1.0 / pbar)) * shell;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(levels.size()); ++i)
            term[i] = compute(i);
    } else {
        for (std::size_t i = 0; i < levels.size(); ++i) term[i] = compute(i);
    }

    LittlewoodPaleyResult r;
    r.pbar = pbar;
    std::map<int, double> shells;
    long double total = 0.0L, last = 0.0L;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        total += term[i];
        int abs = 0, maxl = -1;
        for (int jl : levels[i]) {
            abs += std::max(jl, 0);
            maxl = std::max(maxl, jl);
        }
        shells[abs] += term[i];
        if (maxl == j_max) last += term[i];
    }
    r.total = static_cast<double>(total);
    r.last_shell = static_cast<double>(last);
    for (const auto& [abs, v] : shells) r.per_abs_level.push_back({abs, v});
    return r;
}

BmoResult bmo_seminorm_dyadic(const PointSet& p, int j_max, int box_level_cap, Exec exec) {
    if (box_level_cap < 0 || j_max < box_level_cap)
        throw UsageError("bmo needs 0 <= L <= j_max");
    if (p.size() == 0) throw UsageError("bmo_seminorm_dyadic needs points");
    check_level_budget(p, j_max);

    const int s = p.dim();
    const double invn = 1.0 / static_cast<double>(p.size());
    const auto levels = level_vectors(s, 0, j_max); // BMO shells start at level 0

    std::vector<LevelCells> per_level(levels.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(levels.size()); ++i)
            per_level[i] = analyze_level(p, levels[i]);
    } else {
        for (std::size_t i = 0; i < levels.size(); ++i)
            per_level[i] = analyze_level(p, levels[i]);
    }

    BmoResult best;
    // enumerate dyadic boxes: per-dimension side exponent l_d <= L and position
    const auto boxes_levels = level_vectors(s, 0, box_level_cap);
    for (const auto& lv : boxes_levels) {
        std::uint64_t positions = 1;
        for (int d = 0; d < s; ++d) positions <<= lv[d];
        for (std::uint64_t pos = 0; pos < positions; ++pos) {
            std::vector<std::int64_t> u(s);
            {
                std::uint64_t rest = pos;
                for (int d = s - 1; d >= 0; --d) {
                    u[d] = static_cast<std::int64_t>(rest & ((1ull << lv[d]) - 1));
                    rest >>= lv[d];
                }
            }
            long double acc = 0.0L;
            for (std::size_t i = 0; i < levels.size(); ++i) {
                const auto& j = levels[i];
                bool fits = true;
                for (int d = 0; d < s && fits; ++d) fits = j[d] >= lv[d];
                if (!fits) continue;
                const auto& cells = per_level[i];
                // cells inside the box: shift >> (j_d - l_d) == u_d per dimension
                std::uint64_t inside_cells = 1;
                for (int d = 0; d < s; ++d) inside_cells <<= (j[d] - lv[d]);
                long double sum = 0.0L;
                std::uint64_t matched = 0;
                for (const auto& [key, cnt] : cells.nonempty) {
                    std::uint64_t rest = key;
                    bool in = true;
                    for (int d = s - 1; d >= 0 && in; --d) {
                        const std::uint64_t m = rest & ((1ull << j[d]) - 1);
                        rest >>= j[d];
                        in = (m >> (j[d] - lv[d])) == static_cast<std::uint64_t>(u[d]);
                    }
                    if (!in) continue;
                    ++matched;
                    const double coef = cnt * invn - cells.vol_term;
                    sum += static_cast<long double>(coef) * coef;
                }
                sum += static_cast<long double>(inside_cells - matched) * cells.empty_abs *
                       cells.empty_abs;
                acc += std::exp2(cells.abs_level) * sum;
            }
            int side_sum = 0;
            for (int d = 0; d < s; ++d) side_sum += lv[d];
            const double value = static_cast<double>(acc) * std::exp2(side_sum); // / lambda(U)
            if (value > best.value) {
                best.value = value;
                best.box_level = lv;
                best.box_shift = u;
            }
        }
    }
    return best;
}

OrliczResult orlicz_estimate(const PointSet& p, double beta, std::span<const double> p_grid,
                             int order, Exec exec) {
    if (!(beta > 0.0)) throw DomainError("Orlicz estimate needs beta > 0");
    if (p_grid.empty()) throw UsageError("Orlicz estimate needs a nonempty p grid");
    OrliczResult r;
    for (const double pn : p_grid) {
        if (!(pn > 1.0)) throw DomainError("Orlicz p grid entries must be > 1");
        const double lp = p.dim() <= 3
                              ? lp_quadrature(p, pn, order, exec).value
                              : lp_monte_carlo(p, pn, 20000, 0x0b5e55edull, exec).value;
        const double term = std::pow(pn, -1.0 / beta) * lp;
        r.terms.push_back({pn, term});
        if (term > r.value) {
            r.value = term;
            r.argmax_p = pn;
        }
    }
    return r;
}

} // namespace qmc
