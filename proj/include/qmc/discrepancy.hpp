#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmc/parallel.hpp"
#include "qmc/rational.hpp"
#include "qmc/sequence.hpp"

namespace qmc {

// Exact anchor coordinate num/den in [0, 1].
struct Rat64 {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct LocalDiscrepancyEval {
    std::vector<Rat64> anchor;
    std::uint64_t count = 0; // points in [0, anchor)
    double value = 0.0;      // count/N - volume
};

// Exact strict counting against a rational anchor.
LocalDiscrepancyEval local_discrepancy(const PointSet& p, std::span<const Rat64> anchor);
// Convenience overload; comparisons happen in double.
LocalDiscrepancyEval local_discrepancy(const PointSet& p, std::span<const double> anchor);

struct StarResult {
    double value = 0.0;
    BigRat exact;                 // D* as an exact reduced fraction
    std::uint64_t corners = 0;    // grid corners scanned
};

// Exact star discrepancy by closed/open counting over the critical grid
// (per-coordinate point values plus 1). The corner scan screens in double
// with a safety slack, then certifies every near-maximal corner in exact
// rational arithmetic, so the result is exact. ResourceError when the grid
// exceeds corner_guard.
StarResult star_discrepancy_exact(const PointSet& p, Exec exec = Exec::parallel,
                                  std::uint64_t corner_guard = 100000000ull);

// Warnock's closed form for the L2 discrepancy, O(N^2 s).
double l2_warnock(const PointSet& p, Exec exec = Exec::parallel);

struct LpResult {
    double value = 0.0;
    double p = 2.0;
    int order = 0;                // Gauss order per cell (0 for Monte Carlo)
    double refinement_delta = 0.0; // |value - value at a lower order|
    bool monte_carlo = false;
    double std_error = 0.0;       // MC standard error on the value
    std::uint64_t cells = 0;
    std::uint64_t samples = 0;
};

// Cell-exact tensor Gauss-Legendre integration of |local discrepancy|^p over
// the coordinate-grid cells (count is constant inside each cell). Requires
// s <= 3; beyond the guards use lp_monte_carlo. p = inf delegates to the
// exact star discrepancy.
LpResult lp_quadrature(const PointSet& p, double pnorm, int order = 8,
                       Exec exec = Exec::parallel,
                       std::uint64_t cell_guard = 20000000ull);

LpResult lp_monte_carlo(const PointSet& p, double pnorm, std::uint64_t samples,
                        std::uint64_t seed, Exec exec = Exec::parallel);

// Positive per-coordinate weights gamma_j; gamma_u is the product over u.
struct WeightSequence {
    std::vector<double> gamma;

    static WeightSequence ones(int s) { return {std::vector<double>(s, 1.0)}; }
    double product(const std::vector<int>& subset) const;
    void validate(int dim) const;
};

struct WeightedStarResult {
    double value = 0.0;
    BigRat exact;                // gamma_u * D*_u with the doubles taken exactly
    std::vector<int> argmax_subset; // 0-based coordinate list
};

// max over nonempty subsets u of gamma_u times the star discrepancy of the
// projection onto u (the projection identity for the sup over anchors).
WeightedStarResult weighted_star(const PointSet& p, const WeightSequence& w,
                                 Exec exec = Exec::parallel,
                                 std::uint64_t corner_guard = 100000000ull);

std::uint64_t digit_sum(std::uint64_t n, std::uint32_t b);

struct BoundValues {
    double bejian_faure = 0.0; // log N / (3 log 2) + 1
    std::uint64_t sod = 0;     // S_b(N)
    double sod_bound = 0.0;    // S_2(N) / N
};

BoundValues bound_helpers(std::uint64_t n, std::uint32_t b = 2);

} // namespace qmc
