#pragma once

#include <cmath>
#include <vector>

#include "haarint/complex_matrix.hpp"

namespace haarint {

// LU factorization with partial pivoting, kept in-place: unit lower triangle
// below the diagonal, U on and above. Singular inputs are allowed; a zero
// pivot simply stops contributing (determinant 0).
struct LuFactors {
    ComplexMatrix lu;
    std::vector<int> perm;  // row permutation applied, perm[k] = original row index
    int swaps = 0;
    bool singular = false;
};

inline LuFactors lu_factor(ComplexMatrix a) {
    const int n = a.rows();
    if (!a.square()) throw DimensionError("lu_factor: matrix must be square");
    LuFactors f{std::move(a), {}, 0, false};
    f.perm.resize(n);
    for (int i = 0; i < n; ++i) f.perm[i] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(f.lu(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            continue;
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            ++f.swaps;
        }
        const Complex pivot = f.lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            Complex m = f.lu(i, k) / pivot;
            f.lu(i, k) = m;
            if (m == Complex(0.0)) continue;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

inline Complex det(const LuFactors& f) {
    Complex d = (f.swaps % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < f.lu.rows(); ++i) d *= f.lu(i, i);
    return d;
}

inline LogComplex det_log(const LuFactors& f) {
    LogComplex d = LogComplex::one();
    if (f.swaps % 2 != 0) d = d.negated();
    for (int i = 0; i < f.lu.rows(); ++i) d *= LogComplex::from(f.lu(i, i));
    return d;
}

inline Complex det(const ComplexMatrix& a) { return det(lu_factor(a)); }
inline LogComplex det_log(const ComplexMatrix& a) { return det_log(lu_factor(a)); }

// Solve A x = b using precomputed factors. b is overwritten with x.
inline void lu_solve(const LuFactors& f, std::vector<Complex>& b) {
    const int n = f.lu.rows();
    if (f.singular) throw NumericalError("lu_solve: singular matrix", 0.0);
    std::vector<Complex> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    b = std::move(x);
}

}  // namespace haarint
