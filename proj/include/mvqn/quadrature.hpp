#pragma once

#include <cmath>
#include <vector>

#include "mvqn/errors.hpp"

namespace mvqn {

/// Nodes and weights of an n-point Gauss–Laguerre rule:
///   integral_0^inf e^{-s} h(s) ds  ~=  sum_i weights[i] * h(nodes[i]),
/// exact for polynomials h of degree <= 2n-1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

/// Laguerre polynomial L_n(x) and L_{n-1}(x) by the three-term recurrence.
inline std::pair<double, double> laguerre_pair(int n, double x) {
    double p1 = 1.0;
    double p2 = 0.0;
    for (int k = 0; k < n; ++k) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k + 1.0 - x) * p2 - k * p3) / (k + 1.0);
    }
    return {p1, p2};
}

} // namespace detail

/// Computes the n-point Gauss–Laguerre rule by Newton iteration on the roots
/// of L_n, with the usual stepped initial guesses. Stable well past the node
/// counts the inner-product code ever asks for.
inline QuadratureRule gauss_laguerre(int n) {
    if (n < 1) throw ShapeError("quadrature needs at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        for (int iter = 0; iter < 100; ++iter) {
            auto [p1, p2] = detail::laguerre_pair(n, z);
            double pp = n * (p1 - p2) / z; // dL_n/dx from the recurrence
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-14 * (1.0 + std::abs(z))) break;
        }
        auto [p1, p2] = detail::laguerre_pair(n, z);
        double pp = n * (p1 - p2) / z;
        rule.nodes[i] = z;
        rule.weights[i] = -1.0 / (pp * n * p2);
    }
    return rule;
}

} // namespace mvqn
