#pragma once

#include <cmath>
#include <vector>

#include "haarint/complex_matrix.hpp"

namespace haarint {

namespace debug_hooks {
// Flipped only by self-check code to prove downstream consistency tests
// actually detect a Pfaffian sign error. Never set in production paths.
inline bool flip_pfaffian_sign = false;
}  // namespace debug_hooks

// Pfaffian of an even-dimensional skew-symmetric complex matrix by the
// Parlett-Reid tridiagonalization with partial pivoting, O(n^3) as in
// Wimmer, ACM TOMS 38, 30 (2012), arXiv:1102.3440.
// Convention: pfaffian({{0, a}, {-a, 0}}) = a, and Pf(M)^2 = det(M).
// Odd dimension is a contract violation (callers embed bordered forms).
inline LogComplex pfaffian_log(ComplexMatrix a, double skew_rel_tol = 1e-12) {
    const int n = a.rows();
    if (!a.square()) throw DimensionError("pfaffian: matrix must be square");
    if (n % 2 != 0) throw DimensionError("pfaffian: dimension must be even");

    const double scale = a.max_abs();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (std::abs(a(i, j) + a(j, i)) > skew_rel_tol * std::max(scale, 1e-300))
                throw DomainError("pfaffian: matrix is not skew-symmetric");

    LogComplex pf = LogComplex::one();
    for (int k = 0; k + 1 < n; k += 2) {
        int kp = k + 1;
        double best = std::abs(a(k + 1, k));
        for (int i = k + 2; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                kp = i;
            }
        }
        if (best == 0.0) return LogComplex::zero();
        if (kp != k + 1) {
            for (int j = k; j < n; ++j) std::swap(a(k + 1, j), a(kp, j));
            for (int i = k; i < n; ++i) std::swap(a(i, k + 1), a(i, kp));
            pf = pf.negated();
        }
        const Complex pivot = a(k, k + 1);
        pf *= LogComplex::from(pivot);
        for (int i = k + 2; i < n; ++i) {
            const Complex tau_i = a(k, i) / pivot;
            const Complex col_i = a(i, k + 1);
            if (tau_i == Complex(0.0) && col_i == Complex(0.0)) continue;
            for (int j = k + 2; j < n; ++j)
                a(i, j) += tau_i * a(j, k + 1) - col_i * (a(k, j) / pivot);
        }
    }
    if (debug_hooks::flip_pfaffian_sign) pf = pf.negated();
    return pf;
}

inline Complex pfaffian(const ComplexMatrix& a, double skew_rel_tol = 1e-12) {
    return pfaffian_log(a, skew_rel_tol).value();
}

}  // namespace haarint
