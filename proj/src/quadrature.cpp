#include "qmc/quadrature.hpp"

#include <cmath>

#include "qmc/errors.hpp"

namespace qmc {

GaussRule gauss_legendre(int order) {
    if (order < 1) throw UsageError("quadrature order must be >= 1");
    const int n = order;
    GaussRule rule;
    rule.node.resize(n);
    rule.weight.resize(n);
    const int m = (n + 1) / 2; // roots come in symmetric pairs
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence up to P_n(z)
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        // map from [-1,1] to [0,1]
        rule.node[i] = 0.5 * (1.0 - z);
        rule.node[n - 1 - i] = 0.5 * (1.0 + z);
        rule.weight[i] = 1.0 / ((1.0 - z * z) * pp * pp);
        rule.weight[n - 1 - i] = rule.weight[i];
    }
    return rule;
}

} // namespace qmc
