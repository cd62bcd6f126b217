#pragma once

#include <vector>

namespace qmc {

struct GaussRule {
    std::vector<double> node;   // on [0, 1]
    std::vector<double> weight; // sums to 1
};

// Gauss-Legendre rule with `order` points, mapped to [0, 1].
// Exact for polynomials of degree <= 2*order - 1.
GaussRule gauss_legendre(int order);

} // namespace qmc
