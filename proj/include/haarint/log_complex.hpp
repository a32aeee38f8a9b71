#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace haarint {

using Complex = std::complex<double>;

// Nonzero complex number stored as (log|z|, arg z) so that products of many
// large or tiny factors (determinants, Vandermonde factors, Gamma ratios at
// dimensions up to 64) never overflow the double exponent range.
// arg is not normalized; callers that need a principal argument reduce it.
struct LogComplex {
    double log_abs = -std::numeric_limits<double>::infinity();
    double arg = 0.0;

    static LogComplex one() { return {0.0, 0.0}; }
    static LogComplex zero() { return {}; }

    static LogComplex from(Complex z) {
        if (z == Complex(0.0, 0.0)) return zero();
        return {std::log(std::abs(z)), std::arg(z)};
    }
    static LogComplex from_positive(double x) { return {std::log(x), 0.0}; }
    // exp(w) as a LogComplex, i.e. log_abs = Re w, arg = Im w.
    static LogComplex exp_of(Complex w) { return {w.real(), w.imag()}; }

    bool is_zero() const { return std::isinf(log_abs) && log_abs < 0; }

    Complex value() const {
        if (is_zero()) return {0.0, 0.0};
        return std::exp(log_abs) * Complex(std::cos(arg), std::sin(arg));
    }

    LogComplex& operator*=(const LogComplex& o) {
        log_abs += o.log_abs;
        arg += o.arg;
        return *this;
    }
    LogComplex& operator/=(const LogComplex& o) {
        log_abs -= o.log_abs;
        arg -= o.arg;
        return *this;
    }
    friend LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
    friend LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }

    LogComplex negated() const {
        LogComplex r = *this;
        r.arg += std::acos(-1.0);
        return r;
    }

    // z^w with the branch fixed by the stored argument.
    LogComplex pow(Complex w) const {
        if (is_zero()) return zero();
        Complex lw = Complex(log_abs, arg) * w;
        return exp_of(lw);
    }
};

}  // namespace haarint
