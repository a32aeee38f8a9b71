#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "haarint/special_functions.hpp"

namespace haarint {

// All series in this library share one convergence policy: stop after
// `consecutive_small` successive terms below rel_tol * |partial sum|,
// fail with the last term as tail estimate after max_terms.
struct SeriesControl {
    double rel_tol = 1e-14;
    long max_terms = 10000;
    int consecutive_small = 3;
};

namespace detail {

inline Complex hyp_series(Complex first_term, const std::function<Complex(long, Complex)>& next,
                          const SeriesControl& ctl, const char* who) {
    Complex term = first_term;
    Complex sum = term;
    int small_run = 0;
    for (long m = 0; m < ctl.max_terms; ++m) {
        term = next(m, term);
        // exact termination: the recursion multiplies forward, so a zero term
        // zeroes everything after it (and may precede a denominator zero)
        if (term == Complex(0.0)) return sum;
        sum += term;
        if (std::abs(term) <= ctl.rel_tol * std::abs(sum)) {
            if (++small_run >= ctl.consecutive_small) return sum;
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError(std::string(who) + ": series did not converge", std::abs(term));
}

}  // namespace detail

// Kummer confluent hypergeometric 1F1(a; b; z), direct power series with term
// recursion. Entire in z; a non-positive integer a terminates the series
// exactly through a vanishing factor. b at a non-positive integer is a pole
// unless a terminates the series strictly earlier.
inline Complex kummer_1f1(Complex a, Complex b, Complex z, SeriesControl ctl = {}) {
    if (detail::is_nonpositive_integer(b)) {
        bool saved = detail::is_nonpositive_integer(a) && -a.real() < -b.real();
        if (!saved) throw PoleError("kummer_1f1: lower parameter at non-positive integer",
                                    std::round(b.real()));
    }
    return detail::hyp_series(
        1.0,
        [&](long m, Complex t) {
            return t * (a + static_cast<double>(m)) /
                   ((b + static_cast<double>(m)) * static_cast<double>(m + 1)) * z;
        },
        ctl, "kummer_1f1");
}

// Gauss hypergeometric 2F1(a, b; c; z) by direct series only; no analytic
// continuation or transformation formulas. Admissible z: |z| < 1, or |z| = 1
// with Re(c-a-b) > 0, or a terminating series (a or b a non-positive integer),
// which is a polynomial valid for every z.
inline Complex gauss_2f1(Complex a, Complex b, Complex c, Complex z, SeriesControl ctl = {}) {
    const bool terminating =
        detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b);
    if (detail::is_nonpositive_integer(c)) {
        auto ends_before_pole = [&](Complex p) {
            return detail::is_nonpositive_integer(p) && -p.real() < -c.real();
        };
        if (!ends_before_pole(a) && !ends_before_pole(b))
            throw PoleError("gauss_2f1: lower parameter at non-positive integer",
                            std::round(c.real()));
    }
    if (!terminating) {
        double az = std::abs(z);
        if (az > 1.0 + 1e-12)
            throw DomainError("gauss_2f1: |z| > 1 outside the series domain");
        if (az > 1.0 - 1e-12 && (c - a - b).real() <= 0.0)
            throw DomainError("gauss_2f1: |z| = 1 needs Re(c-a-b) > 0");
    }
    return detail::hyp_series(
        1.0,
        [&](long m, Complex t) {
            double md = static_cast<double>(m);
            return t * (a + md) * (b + md) / ((c + md) * (md + 1.0)) * z;
        },
        ctl, "gauss_2f1");
}

// d^n/dz^n 1F1(a; b; z) = ((a)_n / (b)_n) 1F1(a+n; b+n; z).
inline Complex kummer_1f1_derivative(int n, Complex a, Complex b, Complex z,
                                     SeriesControl ctl = {}) {
    Complex coef = pochhammer(a, n) / pochhammer(b, n);
    if (coef == Complex(0.0)) return 0.0;
    return coef * kummer_1f1(a + static_cast<double>(n), b + static_cast<double>(n), z, ctl);
}

// d^n/dz^n 2F1(a, b; c; z) = ((a)_n (b)_n / (c)_n) 2F1(a+n, b+n; c+n; z).
inline Complex gauss_2f1_derivative(int n, Complex a, Complex b, Complex c, Complex z,
                                    SeriesControl ctl = {}) {
    Complex coef = pochhammer(a, n) * pochhammer(b, n) / pochhammer(c, n);
    if (coef == Complex(0.0)) return 0.0;
    double nd = static_cast<double>(n);
    return coef * gauss_2f1(a + nd, b + nd, c + nd, z, ctl);
}

}  // namespace haarint
