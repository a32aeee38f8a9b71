#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "haarint/complex_matrix.hpp"

namespace haarint {

namespace detail {

// Roots of z^2 - (a+d) z + (ad - bc), i.e. eigenvalues of [[a,b],[c,d]].
inline void eig2x2(Complex a, Complex b, Complex c, Complex d, Complex& l1, Complex& l2) {
    Complex half_tr = 0.5 * (a + d);
    Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    l1 = half_tr + disc;
    l2 = half_tr - disc;
}

struct Givens {
    double c;
    Complex s;
};

inline Givens make_givens(Complex f, Complex g) {
    if (g == Complex(0.0)) return {1.0, Complex(0.0)};
    double af = std::abs(f), ag = std::abs(g);
    double d = std::hypot(af, ag);
    if (af == 0.0) return {0.0, std::conj(g) / ag};
    return {af / d, (f / af) * std::conj(g) / d};
}

}  // namespace detail

// Eigenvalues of a general complex matrix: Householder reduction to upper
// Hessenberg followed by Wilkinson-shifted QR with deflation on subdiagonal
// entries below 1e-14 (|h_ii| + |h_jj|). Dimensions above 64 are rejected;
// if any block fails to deflate within 100*n sweeps a NumericalError carrying
// the residual subdiagonal is thrown. Output sorted by (real, imaginary).
inline std::vector<Complex> eigenvalues(ComplexMatrix h) {
    const int n = h.rows();
    if (!h.square()) throw DimensionError("eigenvalues: matrix must be square");
    if (n > 64) throw DimensionError("eigenvalues: dimension exceeds 64");
    std::vector<Complex> ev(n);
    if (n == 0) return ev;
    if (n == 1) {
        ev[0] = h(0, 0);
        return ev;
    }
    if (n == 2) {
        detail::eig2x2(h(0, 0), h(0, 1), h(1, 0), h(1, 1), ev[0], ev[1]);
        std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        return ev;
    }

    // Householder reduction to Hessenberg form.
    std::vector<Complex> v(n);
    for (int k = 0; k + 2 < n; ++k) {
        double norm = 0.0;
        for (int i = k + 1; i < n; ++i) norm = std::hypot(norm, std::abs(h(i, k)));
        if (norm == 0.0) continue;
        Complex x0 = h(k + 1, k);
        Complex alpha = (x0 == Complex(0.0)) ? Complex(-norm) : -(x0 / std::abs(x0)) * norm;
        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = h(i, k) - ((i == k + 1) ? alpha : Complex(0.0));
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 == 0.0) continue;
        double beta = 2.0 / vnorm2;
        // H <- (I - beta v v*) H
        for (int j = k; j < n; ++j) {
            Complex dot = 0.0;
            for (int i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
            dot *= beta;
            for (int i = k + 1; i < n; ++i) h(i, j) -= dot * v[i];
        }
        // H <- H (I - beta v v*)
        for (int i = 0; i < n; ++i) {
            Complex dot = 0.0;
            for (int j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
            dot *= beta;
            for (int j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(v[j]);
        }
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }

    const double defl_tol = 1e-14;
    const long max_sweeps = 100L * n;
    long sweeps = 0;
    int stall = 0;
    int hi = n - 1;
    std::vector<detail::Givens> rot(n);
    while (hi >= 0) {
        // Deflate converged subdiagonals at the bottom of the active block.
        while (hi > 0) {
            double sub = std::abs(h(hi, hi - 1));
            if (sub <= defl_tol * (std::abs(h(hi - 1, hi - 1)) + std::abs(h(hi, hi)))) {
                h(hi, hi - 1) = 0.0;
                ev[hi] = h(hi, hi);
                --hi;
                stall = 0;
            } else {
                break;
            }
        }
        if (hi == 0) {
            ev[0] = h(0, 0);
            break;
        }
        int lo = hi;
        while (lo > 0) {
            double sub = std::abs(h(lo, lo - 1));
            if (sub <= defl_tol * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo)))) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (hi - lo == 1) {
            detail::eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi), ev[lo], ev[hi]);
            hi = lo - 1;
            stall = 0;
            continue;
        }

        if (++sweeps > max_sweeps) {
            double res = 0.0;
            for (int i = 1; i < n; ++i) res = std::max(res, std::abs(h(i, i - 1)));
            throw NumericalError("eigenvalues: QR iteration did not converge", res);
        }
        Complex shift;
        if (++stall % 25 == 0) {
            shift = h(hi, hi) + Complex(1.5, 0.5) * std::abs(h(hi, hi - 1));
        } else {
            Complex l1, l2;
            detail::eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi), l1, l2);
            shift = (std::abs(l1 - h(hi, hi)) < std::abs(l2 - h(hi, hi))) ? l1 : l2;
        }

        // Explicit shifted QR step on the active block:
        // H - sI = QR (Givens), then H <- RQ + sI.
        for (int i = lo; i <= hi; ++i) h(i, i) -= shift;
        for (int i = lo; i < hi; ++i) {
            rot[i] = detail::make_givens(h(i, i), h(i + 1, i));
            const double c = rot[i].c;
            const Complex s = rot[i].s;
            for (int j = i; j <= hi; ++j) {
                Complex t1 = h(i, j), t2 = h(i + 1, j);
                h(i, j) = c * t1 + s * t2;
                h(i + 1, j) = -std::conj(s) * t1 + c * t2;
            }
            h(i + 1, i) = 0.0;
        }
        for (int i = lo; i < hi; ++i) {
            const double c = rot[i].c;
            const Complex s = rot[i].s;
            const int rmax = std::min(hi, i + 1);
            for (int r = lo; r <= rmax; ++r) {
                Complex t1 = h(r, i), t2 = h(r, i + 1);
                h(r, i) = c * t1 + std::conj(s) * t2;
                h(r, i + 1) = -s * t1 + c * t2;
            }
        }
        for (int i = lo; i <= hi; ++i) h(i, i) += shift;
    }

    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

}  // namespace haarint
