#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qmc/parallel.hpp"
#include "qmc/rational.hpp"
#include "qmc/sequence.hpp"

namespace qmc {

// Dyadic Haar tensor index: level j_l in {-1, 0, 1, ...} and shift
// m_l in {0, ..., 2^j_l - 1} (m_l = 0 when j_l = -1). Level -1 denotes the
// constant function 1 in that coordinate.
struct HaarIndex {
    std::vector<int> level;
    std::vector<std::int64_t> shift;

    void validate() const;
    // |j| = sum of max(j_l, 0)
    int abs_level() const;
};

// Default convention: h takes values in {-1, 0, +1} (L_inf normalization).
// HaarNormalization::l2 rescales by 2^{|j|/2} for cross-checks.
enum class HaarNormalization { linf, l2 };

struct HaarCoefficient {
    HaarIndex index;
    double value = 0.0;
    // exact value, available when every denominator is a power of two
    std::optional<BigRat> exact;
};

// Inner product of the local discrepancy function with h_{j,m}: the counting
// term averages the per-coordinate piecewise-linear factor phi over the
// points and the volume term is a product of per-coordinate integrals psi.
HaarCoefficient haar_coefficient(const PointSet& p, const HaarIndex& idx,
                                 HaarNormalization norm = HaarNormalization::linf);

// Fast path used by the shell sums; no exact fraction.
double haar_coefficient_value(const PointSet& p, const HaarIndex& idx);

struct ShellTerm {
    int abs_level = 0;
    double contribution = 0.0;
};

struct LittlewoodPaleyResult {
    double total = 0.0;
    double last_shell = 0.0; // contribution of vectors with max level = j_max
    double pbar = 2.0;
    std::vector<ShellTerm> per_abs_level;
};

// Truncated right-hand side of the Littlewood-Paley bound:
// sum over level vectors (capped at j_max) of
// 2^{2|j|(1-1/pbar)} (sum over shifts |coef|^pbar)^{2/pbar}, pbar = max(p,2).
LittlewoodPaleyResult littlewood_paley_rhs(const PointSet& p, double pnorm, int j_max,
                                           Exec exec = Exec::parallel);

struct BmoResult {
    double value = 0.0;            // certified lower bound (restricted sup, truncated shells)
    std::vector<int> box_level;    // argmax dyadic box: side 2^-l, position b
    std::vector<std::int64_t> box_shift;
};

// Restricted BMO semi-norm of the local discrepancy function: the sup runs
// over dyadic boxes with side >= 2^-L only and shells are truncated at j_max
// (levels start at 0 here), so the result is a lower bound of the true
// semi-norm.
BmoResult bmo_seminorm_dyadic(const PointSet& p, int j_max, int box_level_cap,
                              Exec exec = Exec::parallel);

struct OrliczResult {
    double value = 0.0; // equivalence-class estimate; absolute constants unknown
    double argmax_p = 0.0;
    std::vector<std::pair<double, double>> terms; // (p, p^{-1/beta} * Lp)
};

// sup over the p grid of p^{-1/beta} * Lp(local discrepancy).
OrliczResult orlicz_estimate(const PointSet& p, double beta, std::span<const double> p_grid,
                             int order = 8, Exec exec = Exec::parallel);

} // namespace qmc
