#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qmc/parallel.hpp"
#include "qmc/table.hpp"

namespace qmc {

// One experiment run: tables (primary artifact), SVG figures (derived), hard
// assertion failures, and labels for asymptotic claims that are reported but
// not asserted.
struct RecipeOutput {
    std::string name;
    bool ok = true;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    std::vector<std::pair<std::string, Table>> tables;
    std::vector<std::pair<std::string, std::string>> figures;

    void fail(const std::string& what) {
        ok = false;
        failures.push_back(what);
    }
};

// N * D* of the van der Corput sequence for N = 2..32 against the
// log N/(3 log 2) + 1 and dyadic sum-of-digits bounds; the power-of-two rows
// and both bounds are hard assertions.
RecipeOutput recipe_figure1(Exec exec = Exec::parallel);

// Running maximum of N * L_{p,N}(vdC) / log N up to n_max and its proximity
// to 1/(6 log 2); trend report, nothing asserted.
RecipeOutput recipe_vdc_lp_limsup(double p, std::uint64_t n_max, Exec exec = Exec::parallel);

// Scaled L2 of the order-2 interlaced sequence (from a Faure base in
// dimension 2s) at N = 2^k, k in [k_min, k_max]; asserts the interlaced
// log-log slope stays <= 0.05. For s = 1 a plain vdC comparison is included.
RecipeOutput recipe_interlaced_l2(int s, int k_min, int k_max, Exec exec = Exec::parallel);

// Random-matrix (or random digital-Kronecker) sampling study: quantiles of
// the scaled star discrepancy across `reps` draws; exploratory only.
RecipeOutput recipe_metrical(int s, int m, std::uint32_t base, std::uint64_t n_max,
                             int reps, std::uint64_t seed, const std::string& variant,
                             Exec exec = Exec::parallel);

// Weighted star discrepancy of Halton/Faure prefixes under the weight
// families gamma_j = j^-(2+delta) and gamma_j = 1/j; trend report with the
// gamma = 1 reduction asserted exactly.
RecipeOutput recipe_weighted(const std::string& preset, int s,
                             const std::vector<std::uint64_t>& n_list,
                             double delta = 1.0, Exec exec = Exec::parallel);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// First n primes (Halton bases).
std::vector<std::uint32_t> first_primes(int n);

// Writes tables (csv or json) and figures (svg) into out_dir; returns paths.
std::vector<std::string> write_outputs(const RecipeOutput& out, const std::string& out_dir,
                                       const std::string& format);

} // namespace qmc
