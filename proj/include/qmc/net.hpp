#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmc/parallel.hpp"
#include "qmc/sequence.hpp"

namespace qmc {

// All compositions (d_1,...,d_s) of w into s nonnegative parts, colex order.
std::vector<std::vector<int>> compositions(int w, int s);

struct TValueEntry {
    int m = 0;
    int t = 0;
    // colex-first composition failing the rank condition at t-1 (absent when t = 0)
    std::optional<std::vector<int>> witness;
};

struct TValueReport {
    int m_max = 0;
    int t_star = 0; // max over m <= m_max; certifies the definition only that far
    std::vector<TValueEntry> rows;
};

// Smallest t in [0, m] such that for every composition d_1+...+d_s = m-t the
// stacked first d_j rows of the C_j(m) have rank m-t over F_b.
TValueEntry t_value_at_m(const GeneratorSet& g, int m, Exec exec = Exec::parallel);

TValueReport exact_t(const GeneratorSet& g, int m_max, Exec exec = Exec::parallel);

struct NetViolation {
    std::vector<int> shape;        // (d_1,...,d_s)
    std::vector<std::uint64_t> cell; // (a_1,...,a_s)
    std::uint64_t count = 0;
    std::uint64_t expected = 0;
};

struct NetCheckResult {
    bool ok = false;
    std::optional<NetViolation> violation; // colex-first offending interval
};

// Counts points of P (|P| = b^m required) in every elementary interval of
// volume b^(t-m); true iff each contains exactly b^t points.
NetCheckResult verify_net(const PointSet& p, int t, int m, Exec exec = Exec::parallel);

struct BlockScanResult {
    int m = 0;
    int t = 0;
    std::vector<NetCheckResult> blocks; // k = 0..k_max
    bool all_ok() const {
        for (const auto& b : blocks)
            if (!b.ok) return false;
        return true;
    }
};

// verify_net on each aligned sub-block (x_{k b^m}, ..., x_{(k+1) b^m - 1});
// t defaults to the exact_t certificate up to m.
BlockScanResult block_net_scan(const GeneratorSet& g, int m, int k_max,
                               std::optional<int> t = std::nullopt,
                               Exec exec = Exec::parallel);

struct AdmissibilityReport {
    std::uint64_t n_points = 0;
    bool admissible = false;
    // inf over pairs of ||n-k||_b * prod_j ||x_n - x_k||_b equals b^min_exponent
    int min_exponent = 0;
    int d_empirical = 0; // smallest d with infimum >= b^-d
    std::uint64_t pair_n = 0, pair_k = 0;
    // vector norm convention is the product over coordinates (Levin)
    const char* norm_note = "vector b-adic norm = product of coordinate norms";
};

AdmissibilityReport d_admissibility(const PointSet& p, std::uint64_t n,
                                    Exec exec = Exec::parallel);

} // namespace qmc
