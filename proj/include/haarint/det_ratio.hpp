#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "haarint/determinant.hpp"
#include "haarint/spectrum.hpp"

namespace haarint {

// f(order, z) returns d^order f / dz^order at z.
using DerivFn = std::function<Complex(int, Complex)>;
// k(dx, dy, x, y) returns the mixed partial derivative of a bivariate kernel.
using BivariateDerivFn = std::function<Complex(int, int, Complex, Complex)>;

// Product form of det[t_j^{N-k}]_{j,k=1..N} = prod_{j<k} (t_j - t_k).
inline LogComplex vandermonde_log(const std::vector<Complex>& t) {
    LogComplex v = LogComplex::one();
    const int n = static_cast<int>(t.size());
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) v *= LogComplex::from(t[j] - t[k]);
    return v;
}

inline Complex vandermonde(const std::vector<Complex>& t) { return vandermonde_log(t).value(); }

struct DetRatioResult {
    Complex value;
    LogComplex log_value;
    bool clustered = false;
    double condition_log10 = 0.0;  // Hadamard bound over |det| for the denominator
};

namespace detail {

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// d^p/dx^p x^m / p! = binom(m, p) x^(m-p) for integer m >= 0.
inline Complex monomial_taylor(int m, int p, Complex x) {
    if (p > m) return 0.0;
    double coef = 1.0;
    for (int i = 0; i < p; ++i) coef *= static_cast<double>(m - i) / (i + 1);
    Complex pw = 1.0;
    for (int i = 0; i < m - p; ++i) pw *= x;
    return coef * pw;
}

struct ConfluentLayout {
    std::vector<Complex> centers;  // one per column, cluster center repeated
    std::vector<int> orders;       // derivative order per column
};

inline ConfluentLayout confluent_layout(const Spectrum& s) {
    ConfluentLayout lay;
    for (const auto& cluster : s.clusters) {
        Complex center = 0.0;
        for (int idx : cluster) center += s.values[idx];
        center /= static_cast<double>(cluster.size());
        for (int p = 0; p < static_cast<int>(cluster.size()); ++p) {
            lay.centers.push_back(center);
            lay.orders.push_back(p);
        }
    }
    return lay;
}

// det of the confluent monomial matrix for the given layout; this is the
// degenerate limit of the Vandermonde determinant taken column by column,
// so numerator/denominator conventions always cancel in a ratio.
inline LogComplex monomial_confluent_det_log(const ConfluentLayout& lay, double* cond_log10) {
    const int n = static_cast<int>(lay.centers.size());
    ComplexMatrix v(n, n);
    for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c)
            v(j, c) = monomial_taylor(n - 1 - j, lay.orders[c], lay.centers[c]);
    LogComplex d = det_log(v);
    if (cond_log10) {
        double had = 0.0;
        for (int j = 0; j < n; ++j) {
            double row2 = 0.0;
            for (int c = 0; c < n; ++c) row2 += std::norm(v(j, c));
            had += 0.5 * std::log(std::max(row2, 1e-300));
        }
        *cond_log10 = (had - d.log_abs) / std::log(10.0);
    }
    return d;
}

}  // namespace detail

// Ratio det[f_j(x_k)] / det[x_j^{N-k}] with clustered points replaced by
// Taylor columns (divided differences in the coincident limit). The same
// column construction is applied to the monomial family in the denominator.
inline DetRatioResult det_ratio(const std::vector<DerivFn>& funcs, const Spectrum& x) {
    const int n = x.size();
    if (static_cast<int>(funcs.size()) != n)
        throw DimensionError("det_ratio: need as many functions as points");
    DetRatioResult r;
    r.clustered = x.degenerate();
    auto lay = detail::confluent_layout(x);
    ComplexMatrix num(n, n);
    for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c)
            num(j, c) = funcs[j](lay.orders[c], lay.centers[c]) /
                        detail::factorial(lay.orders[c]);
    LogComplex denom = detail::monomial_confluent_det_log(lay, &r.condition_log10);
    if (denom.is_zero())
        throw NumericalError("det_ratio: confluent Vandermonde vanished", 0.0);
    r.log_value = det_log(num) / denom;
    r.value = r.log_value.value();
    return r;
}

// Two-sided version: det[K(x_j, y_k)] / (det[x_j^{N-k}] det[y_j^{N-k}]),
// with confluent rows for clustered x and confluent columns for clustered y.
inline DetRatioResult det_ratio2(const BivariateDerivFn& kernel, const Spectrum& x,
                                 const Spectrum& y) {
    const int n = x.size();
    if (y.size() != n) throw DimensionError("det_ratio2: spectra sizes differ");
    DetRatioResult r;
    r.clustered = x.degenerate() || y.degenerate();
    auto lx = detail::confluent_layout(x);
    auto ly = detail::confluent_layout(y);
    ComplexMatrix num(n, n);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c)
            num(i, c) = kernel(lx.orders[i], ly.orders[c], lx.centers[i], ly.centers[c]) /
                        (detail::factorial(lx.orders[i]) * detail::factorial(ly.orders[c]));
    double cx = 0.0, cy = 0.0;
    LogComplex dx = detail::monomial_confluent_det_log(lx, &cx);
    LogComplex dy = detail::monomial_confluent_det_log(ly, &cy);
    r.condition_log10 = std::max(cx, cy);
    if (dx.is_zero() || dy.is_zero())
        throw NumericalError("det_ratio2: confluent Vandermonde vanished", 0.0);
    r.log_value = det_log(num) / (dx * dy);
    r.value = r.log_value.value();
    return r;
}

}  // namespace haarint
