#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "haarint/errors.hpp"

namespace haarint {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

// Orthonormal Hermite polynomials for the weight exp(-x^2):
// p_0 = pi^{-1/4}, p_{j+1} = x sqrt(2/(j+1)) p_j - sqrt(j/(j+1)) p_{j-1},
// p_n' = sqrt(2n) p_{n-1}.
inline void hermite_eval(int n, double x, double& pn, double& dpn) {
    double pm1 = 0.0;
    double p = 0.7511255444649425;  // pi^{-1/4}
    for (int j = 0; j < n; ++j) {
        double pj1 = x * std::sqrt(2.0 / (j + 1)) * p - std::sqrt(j / (j + 1.0)) * pm1;
        pm1 = p;
        p = pj1;
    }
    pn = p;
    dpn = std::sqrt(2.0 * n) * pm1;
}

}  // namespace detail

// Nodes and weights for integrals of the form  int e^{-x^2} f(x) dx.
// Roots by Newton iteration with the classical asymptotic seeds; weights from
// the Christoffel function 1 / sum_{k<n} p_k(x_i)^2.
inline QuadratureRule gauss_hermite(int n) {
    if (n < 1 || n > 1024) throw DimensionError("gauss_hermite: order out of range");
    const int m = (n + 1) / 2;
    std::vector<double> pos(m);
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            double c = 2.0 * n + 1.0;
            z = std::sqrt(c) - 1.85575 * std::pow(c, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * pos[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * pos[1];
        } else {
            z = 2.0 * z - pos[i - 2];
        }
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            double pn, dpn;
            detail::hermite_eval(n, z, pn, dpn);
            double step = pn / dpn;
            z -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged) throw ConvergenceError("gauss_hermite: Newton stalled", z);
        if (n % 2 == 1 && i == m - 1) z = 0.0;  // symmetry pins the center node
        pos[i] = z;
    }

    QuadratureRule rule;
    rule.nodes.reserve(n);
    for (int i = 0; i < m; ++i)  // pos[] descends, so -pos[] ascends
        if (pos[i] > 0.0) rule.nodes.push_back(-pos[i]);
    if (n % 2 == 1) rule.nodes.push_back(0.0);
    for (int i = m - 1; i >= 0; --i)
        if (pos[i] > 0.0) rule.nodes.push_back(pos[i]);

    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes[i];
        double pm1 = 0.0, p = 0.7511255444649425, s = p * p;
        for (int j = 0; j + 1 < n; ++j) {
            double pj1 = x * std::sqrt(2.0 / (j + 1)) * p - std::sqrt(j / (j + 1.0)) * pm1;
            pm1 = p;
            p = pj1;
            s += p * p;
        }
        rule.weights[i] = 1.0 / s;
    }
    return rule;
}

// Nodes and weights for  int_a^b f(x) dx.
inline QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
    if (n < 1 || n > 1024) throw DimensionError("gauss_legendre: order out of range");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            double p = 1.0, pm1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double pj1 = ((2.0 * j + 1.0) * z * p - j * pm1) / (j + 1);
                pm1 = p;
                p = pj1;
            }
            dp = n * (z * p - pm1) / (z * z - 1.0);
            double step = p / dp;
            z -= step;
            if (std::abs(step) <= 1e-15) {
                converged = true;
                break;
            }
        }
        if (!converged) throw ConvergenceError("gauss_legendre: Newton stalled", z);
        double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;  // cos seeds descend, so -z ascends
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    if (a != -1.0 || b != 1.0) {
        double half = 0.5 * (b - a), mid = 0.5 * (b + a);
        for (int i = 0; i < n; ++i) {
            rule.nodes[i] = mid + half * rule.nodes[i];
            rule.weights[i] *= half;
        }
    }
    return rule;
}

}  // namespace haarint
