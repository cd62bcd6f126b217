// Timing comparison of the OpenMP kernels against their serial reference
// paths. Results must match bit-for-bit; the benchmark asserts that too.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qmc/discrepancy.hpp"
#include "qmc/haar.hpp"
#include "qmc/net.hpp"
#include "qmc/sequence.hpp"

using namespace qmc;

namespace {

template <class F>
double time_ms(F&& f, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

int failures = 0;

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
    if (!identical) ++failures;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run serially\n");
#endif
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        const auto pts = preset("vdc", 1, 2, 16).prefix(4096, Exec::serial);
        double a = 0, bq = 0;
        const double ts = time_ms([&] { a = l2_warnock(pts, Exec::serial); });
        const double tp = time_ms([&] { bq = l2_warnock(pts, Exec::parallel); });
        row("l2_warnock N=4096", ts, tp, a == bq);
    }
    {
        const auto pts = preset("faure", 2, 3, 8).prefix(729, Exec::serial);
        StarResult a, bq;
        const double ts = time_ms([&] { a = star_discrepancy_exact(pts, Exec::serial); });
        const double tp = time_ms([&] { bq = star_discrepancy_exact(pts, Exec::parallel); });
        row("star exact s=2 N=729", ts, tp, a.exact == bq.exact);
    }
    {
        const auto pts = preset("faure", 3, 3, 5).prefix(81, Exec::serial);
        LpResult a, bq;
        const double ts = time_ms([&] { a = lp_quadrature(pts, 2.0, 4, Exec::serial); });
        const double tp = time_ms([&] { bq = lp_quadrature(pts, 2.0, 4, Exec::parallel); });
        row("lp cell quadrature s=3", ts, tp, a.value == bq.value);
    }
    {
        const auto pts = preset("vdc", 1, 2, 16).prefix(2048, Exec::serial);
        LpResult a, bq;
        const double ts = time_ms([&] { a = lp_monte_carlo(pts, 3.0, 100000, 7, Exec::serial); });
        const double tp = time_ms([&] { bq = lp_monte_carlo(pts, 3.0, 100000, 7, Exec::parallel); });
        row("lp monte carlo", ts, tp, a.value == bq.value);
    }
    {
        const auto pts = preset("faure", 2, 2, 12).prefix(256, Exec::serial);
        LittlewoodPaleyResult a, bq;
        const double ts = time_ms([&] { a = littlewood_paley_rhs(pts, 2.0, 8, Exec::serial); });
        const double tp = time_ms([&] { bq = littlewood_paley_rhs(pts, 2.0, 8, Exec::parallel); });
        row("littlewood-paley jmax=8", ts, tp, a.total == bq.total);
    }
    {
        const auto g = preset("random", 3, 2, 16, 42);
        TValueReport a, bq;
        const double ts = time_ms([&] { a = exact_t(g, 16, Exec::serial); });
        const double tp = time_ms([&] { bq = exact_t(g, 16, Exec::parallel); });
        row("exact_t m<=16 s=3", ts, tp, a.t_star == bq.t_star);
    }
    {
        const auto pts = preset("vdc", 1, 2, 12).prefix(2048, Exec::serial);
        AdmissibilityReport a, bq;
        const double ts = time_ms([&] { a = d_admissibility(pts, 2048, Exec::serial); });
        const double tp = time_ms([&] { bq = d_admissibility(pts, 2048, Exec::parallel); });
        row("d_admissibility N=2048", ts, tp,
            a.d_empirical == bq.d_empirical && a.pair_n == bq.pair_n && a.pair_k == bq.pair_k);
    }
    return failures;
}
