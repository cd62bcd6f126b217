// Test-only oracles, kept independent of the library's computation paths:
// dense-grid star discrepancy bounds, the sorted 1-d star formula, and direct
// numerical quadrature of Haar inner products.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qmc/haar.hpp"
#include "qmc/quadrature.hpp"
#include "qmc/rational.hpp"
#include "qmc/sequence.hpp"

namespace oracle {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Lower bound for D*: both one-sided local discrepancy limits evaluated at
// every anchor of the regular grid (i_1/g, ..., i_s/g), i_j in 1..g.
inline double dense_grid_star_lb(const qmc::PointSet& p, std::uint64_t g) {
    using u128 = unsigned __int128;
    const int s = p.dim();
    const std::size_t n = p.size();
    std::vector<std::uint64_t> idx(s, 1);
    double best = 0.0;
    while (true) {
        std::uint64_t a_open = 0, a_closed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool open = true, closed = true;
            for (int j = 0; j < s && closed; ++j) {
                const u128 lhs = (u128)p.num(i, j) * g;
                const u128 rhs = (u128)idx[j] * p.denom(j);
                if (lhs > rhs) { open = false; closed = false; }
                else if (lhs == rhs) open = false;
            }
            a_open += open && closed;
            a_closed += closed;
        }
        double vol = 1.0;
        for (int j = 0; j < s; ++j) vol *= static_cast<double>(idx[j]) / g;
        best = std::max(best, vol - static_cast<double>(a_open) / n);
        best = std::max(best, static_cast<double>(a_closed) / n - vol);
        int j = 0;
        while (j < s && idx[j] == g) idx[j++] = 1;
        if (j == s) break;
        ++idx[j];
    }
    return best;
}

// Exact star discrepancy in dimension one via the sorted-point formula.
inline qmc::BigRat star_1d_sorted(const qmc::PointSet& p) {
    const std::size_t n = p.size();
    std::vector<qmc::BigRat> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(qmc::make_rat(p.num(i, 0), p.denom(0)));
    std::sort(xs.begin(), xs.end());
    qmc::BigRat best(0);
    for (std::size_t i = 1; i <= n; ++i) {
        const qmc::BigRat hi = qmc::BigRat(static_cast<std::uint64_t>(i)) /
                               qmc::BigRat(static_cast<std::uint64_t>(n)) - xs[i - 1];
        const qmc::BigRat lo = xs[i - 1] - qmc::BigRat(static_cast<std::uint64_t>(i - 1)) /
                                               qmc::BigRat(static_cast<std::uint64_t>(n));
        best = std::max(best, std::max(hi, lo));
    }
    return best;
}

inline double haar_1d(double t, int j, std::int64_t m) {
    if (j == -1) return 1.0;
    const double delta = std::ldexp(1.0, -j);
    const double a = m * delta;
    if (t < a || t >= a + delta) return 0.0;
    return t < a + 0.5 * delta ? 1.0 : -1.0;
}

// Direct tensor quadrature of <Delta, h_{j,m}> over the support of h: cells
// split at the support endpoints/midpoint and at every point coordinate, so
// the integrand is polynomial on each cell.
inline double haar_coeff_quadrature(const qmc::PointSet& p, const qmc::HaarIndex& idx) {
    const int s = p.dim();
    const std::size_t n = p.size();
    const auto rule = qmc::gauss_legendre(3);

    std::vector<std::vector<double>> bp(s);
    for (int l = 0; l < s; ++l) {
        double lo = 0.0, hi = 1.0, mid = 0.5;
        if (idx.level[l] >= 0) {
            const double delta = std::ldexp(1.0, -idx.level[l]);
            lo = idx.shift[l] * delta;
            hi = lo + delta;
            mid = lo + 0.5 * delta;
        }
        auto& v = bp[l];
        v.push_back(lo);
        v.push_back(mid);
        v.push_back(hi);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = p.value(i, l);
            if (x > lo && x < hi) v.push_back(x);
        }
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    std::vector<std::size_t> ci(s, 0);
    double total = 0.0;
    while (true) {
        double width[8], left[8];
        double cellvol = 1.0;
        for (int l = 0; l < s; ++l) {
            left[l] = bp[l][ci[l]];
            width[l] = bp[l][ci[l] + 1] - left[l];
            cellvol *= width[l];
        }
        if (cellvol > 0) {
            std::vector<int> qi(s, 0);
            double acc = 0.0;
            while (true) {
                double t[8], wq = 1.0, hval = 1.0, vol = 1.0;
                for (int l = 0; l < s; ++l) {
                    t[l] = left[l] + rule.node[qi[l]] * width[l];
                    wq *= rule.weight[qi[l]];
                    hval *= haar_1d(t[l], idx.level[l], idx.shift[l]);
                    vol *= t[l];
                }
                std::size_t count = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    bool in = true;
                    for (int l = 0; l < s && in; ++l) in = p.value(i, l) < t[l];
                    count += in;
                }
                const double delta = static_cast<double>(count) / n - vol;
                acc += wq * delta * hval;
                int l = 0;
                while (l < s && qi[l] == static_cast<int>(rule.node.size()) - 1) qi[l++] = 0;
                if (l == s) break;
                ++qi[l];
            }
            total += acc * cellvol;
        }
        int l = 0;
        while (l < s && ci[l] == bp[l].size() - 2) ci[l++] = 0;
        if (l == s) break;
        ++ci[l];
    }
    return total;
}

// seeded random point set with dyadic coordinates (denominator 2^prec)
inline qmc::PointSet random_dyadic_set(int s, std::size_t n, int prec, std::uint64_t seed) {
    qmc::PointSet p(s, 2u, prec, "random-dyadic");
    std::uint64_t h = seed;
    const std::uint64_t den = std::uint64_t{1} << prec;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint64_t> nums(s);
        for (int j = 0; j < s; ++j) {
            h = splitmix64(h);
            nums[j] = h % den;
        }
        p.append(std::span<const std::uint64_t>(nums));
    }
    return p;
}

} // namespace oracle
