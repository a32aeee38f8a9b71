#pragma once

#include <vector>

#include "haarint/det_ratio.hpp"
#include "haarint/determinant.hpp"
#include "haarint/eval_result.hpp"
#include "haarint/hypergeometric.hpp"
#include "haarint/spectrum.hpp"

namespace haarint {
namespace closed {

// The one-source determinants admit two equivalent column families that
// differ in how a hypergeometric argument walks with the column index.
enum class ArgStyle { constant, shifted };

namespace cfdetail {

inline double int_binom(int p, int q) {
    return detail::factorial(p) / (detail::factorial(q) * detail::factorial(p - q));
}

inline Complex cpow_int(Complex z, int k) {
    Complex r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

// prod_{j=1}^{n} (j-1)!^2 Gamma(alpha+n-j+1) / Gamma(alpha+n)
inline LogComplex column_weight_log(int n, Complex alpha) {
    LogComplex g = LogComplex::one();
    for (int j = 1; j <= n; ++j) {
        Complex w = 2.0 * log_gamma(Complex(static_cast<double>(j))) +
                    log_gamma(alpha + Complex(static_cast<double>(n - j + 1))) -
                    log_gamma(alpha + Complex(static_cast<double>(n)));
        g *= LogComplex::exp_of(w);
    }
    return g;
}

// Raw p-th derivative of F(z) * z^e by the product rule, where dF is the raw
// q-th derivative of the hypergeometric factor.
template <typename DF>
Complex leibniz_deriv(int p, int e, Complex z, DF&& dF) {
    Complex sum = 0.0;
    for (int q = 0; q <= p; ++q) {
        int mth = p - q;
        if (mth > e) continue;
        sum += int_binom(p, q) * dF(q) * detail::monomial_taylor(e, mth, z) *
               detail::factorial(mth);
    }
    return sum;
}

// Mixed partial d^p_x d^q_y of h(x y):
// sum_i p! q! / (i! (p-i)! (q-i)!) x^{q-i} y^{p-i} h^{(p+q-i)}(x y).
template <typename HD>
Complex product_kernel_deriv(int p, int q, Complex x, Complex y, HD&& h_deriv) {
    Complex sum = 0.0;
    for (int i = 0; i <= std::min(p, q); ++i) {
        double coef = detail::factorial(p) * detail::factorial(q) /
                      (detail::factorial(i) * detail::factorial(p - i) *
                       detail::factorial(q - i));
        sum += coef * cpow_int(x, q - i) * cpow_int(y, p - i) * h_deriv(p + q - i, x * y);
    }
    return sum;
}

inline EvalResult from_ratio(const DetRatioResult& r) {
    EvalResult out;
    out.value = r.value;
    out.diag.normalization = to_string(Normalization::unit_mean);
    out.diag.clustered = r.clustered;
    out.diag.condition_log10 = r.condition_log10;
    return out;
}

}  // namespace cfdetail

// det[ 1F1(a_j; N-j+1; -mu2_k) mu2_k^{N-j} ] / Delta_N(mu2),
// a_j = -alpha for every column or -alpha-j+1 walking with the column.
inline EvalResult ingham_siegel_1(const Spectrum& mu2, Complex alpha,
                                  ArgStyle style = ArgStyle::constant) {
    const int n = mu2.size();
    if (n < 1) throw DimensionError("ingham_siegel_1: empty spectrum");
    SeriesControl ctl;
    std::vector<DerivFn> funcs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int e = n - 1 - i;
        const Complex a = style == ArgStyle::constant ? -alpha
                                                      : -alpha - Complex(static_cast<double>(i));
        const Complex b(static_cast<double>(e + 1));
        funcs[static_cast<size_t>(i)] = [=](int p, Complex z) {
            return cfdetail::leibniz_deriv(p, e, z, [&](int q) {
                Complex d = kummer_1f1_derivative(q, a, b, -z, ctl);
                return q % 2 ? -d : d;
            });
        };
    }
    return cfdetail::from_ratio(det_ratio(funcs, mu2));
}

// column_weight(alpha) * det[ 1F1(-alpha-N+1; 1; -mu2_j nu2_k) ] / (Delta Delta).
inline EvalResult ingham_siegel_2(const Spectrum& mu2, const Spectrum& nu2, Complex alpha) {
    const int n = mu2.size();
    if (n < 1 || nu2.size() != n)
        throw DimensionError("ingham_siegel_2: spectra must have equal positive length");
    SeriesControl ctl;
    const Complex a = -alpha - Complex(static_cast<double>(n - 1));
    BivariateDerivFn ker = [=](int p, int q, Complex x, Complex y) {
        return cfdetail::product_kernel_deriv(p, q, x, y, [&](int d, Complex t) {
            Complex h = kummer_1f1_derivative(d, a, Complex(1.0), -t, ctl);
            return d % 2 ? -h : h;
        });
    };
    EvalResult out = cfdetail::from_ratio(det_ratio2(ker, mu2, nu2));
    out.value *= cfdetail::column_weight_log(n, alpha).value();
    return out;
}

// det[ 2F1(-alpha-j+1, b_j; N-j+1; mu2_k) mu2_k^{N-j} ] / Delta_N(mu2),
// b_j = -beta-j+1 walking with the column or -beta fixed.
inline EvalResult fisher_hartwig_1(const Spectrum& mu2, Complex alpha, Complex beta,
                                   ArgStyle beta_style = ArgStyle::shifted) {
    const int n = mu2.size();
    if (n < 1) throw DimensionError("fisher_hartwig_1: empty spectrum");
    SeriesControl ctl;
    std::vector<DerivFn> funcs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int e = n - 1 - i;
        const Complex a1 = -alpha - Complex(static_cast<double>(i));
        const Complex a2 = beta_style == ArgStyle::shifted
                               ? -beta - Complex(static_cast<double>(i))
                               : -beta;
        const Complex c(static_cast<double>(e + 1));
        funcs[static_cast<size_t>(i)] = [=](int p, Complex z) {
            return cfdetail::leibniz_deriv(
                p, e, z, [&](int q) { return gauss_2f1_derivative(q, a1, a2, c, z, ctl); });
        };
    }
    return cfdetail::from_ratio(det_ratio(funcs, mu2));
}

// column_weight(alpha) column_weight(beta) / prod (j-1)!^2
//   * det[ 2F1(-alpha-N+1, -beta-N+1; 1; mu2_j nu2_k) ] / (Delta Delta).
inline EvalResult fisher_hartwig_2(const Spectrum& mu2, const Spectrum& nu2, Complex alpha,
                                   Complex beta) {
    const int n = mu2.size();
    if (n < 1 || nu2.size() != n)
        throw DimensionError("fisher_hartwig_2: spectra must have equal positive length");
    SeriesControl ctl;
    const Complex a1 = -alpha - Complex(static_cast<double>(n - 1));
    const Complex a2 = -beta - Complex(static_cast<double>(n - 1));
    BivariateDerivFn ker = [=](int p, int q, Complex x, Complex y) {
        return cfdetail::product_kernel_deriv(p, q, x, y, [&](int d, Complex t) {
            return gauss_2f1_derivative(d, a1, a2, Complex(1.0), t, ctl);
        });
    };
    EvalResult out = cfdetail::from_ratio(det_ratio2(ker, mu2, nu2));
    LogComplex pre = cfdetail::column_weight_log(n, alpha) * cfdetail::column_weight_log(n, beta);
    Complex fac_corr = 0.0;
    for (int j = 1; j <= n; ++j)
        fac_corr += 2.0 * log_gamma(Complex(static_cast<double>(j)));
    pre /= LogComplex::exp_of(fac_corr);
    out.value *= pre.value();
    return out;
}

// Toeplitz determinant of the scalar symbol (1 + s conj(t))^alpha exp(b t) on
// the unit circle: N x N matrix with band entries
//   m >= 0:  binom(alpha, m) 1F1(m - alpha; m + 1; -s b)
//   m <  0:  (s b)^{|m|} / |m|!  1F1(-alpha; |m| + 1; -s b)
// unit_mean leaves the determinant as-is; two_pi_n divides by (2 pi)^N.
inline EvalResult toeplitz_scalar(int n, Complex alpha, Complex b, int sign,
                                  Normalization norm = Normalization::unit_mean) {
    if (n < 1) throw DimensionError("toeplitz_scalar: need N >= 1");
    if (sign != 1 && sign != -1) throw DomainError("toeplitz_scalar: sign must be +1 or -1");
    if (alpha.real() <= -1.0) throw DomainError("toeplitz_scalar: need Re(alpha) > -1");
    SeriesControl ctl;
    const double s = static_cast<double>(sign);
    const Complex sb = s * b;
    std::vector<Complex> band(static_cast<size_t>(2 * n - 1));  // band[m + n - 1]
    for (int m = -(n - 1); m <= n - 1; ++m) {
        Complex v;
        if (m >= 0) {
            v = gen_binomial(alpha, m) *
                kummer_1f1(Complex(static_cast<double>(m)) - alpha,
                           Complex(static_cast<double>(m + 1)), -sb, ctl);
        } else {
            const int mm = -m;
            v = cfdetail::cpow_int(sb, mm) / detail::factorial(mm) *
                kummer_1f1(-alpha, Complex(static_cast<double>(mm + 1)), -sb, ctl);
        }
        band[static_cast<size_t>(m + n - 1)] = v;
    }
    ComplexMatrix t(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) t(j, k) = band[static_cast<size_t>(j - k + n - 1)];
    EvalResult out;
    out.value = det(t);
    out.diag.normalization = to_string(norm);
    if (norm == Normalization::two_pi_n) {
        const double two_pi = 6.283185307179586476925287;
        for (int i = 0; i < n; ++i) out.value /= two_pi;
    }
    return out;
}

enum class FhStandardVariant { binom_det, barnes_g };

// Sourceless two-exponent symbol on the unit circle.
// binom_det: det[ binom(alpha+beta, beta - j + k) ], any Re(alpha+beta) > -1.
// barnes_g: log-space product  G(N+1) prod_{k=0}^{N-1} G-ratio, non-negative
// integer exponents only.
inline EvalResult fisher_hartwig_standard(int n, Complex alpha, Complex beta,
                                          FhStandardVariant variant = FhStandardVariant::binom_det,
                                          Normalization norm = Normalization::unit_mean) {
    if (n < 1) throw DimensionError("fisher_hartwig_standard: need N >= 1");
    if ((alpha + beta).real() <= -1.0)
        throw DomainError("fisher_hartwig_standard: need Re(alpha+beta) > -1");
    EvalResult out;
    if (variant == FhStandardVariant::binom_det) {
        ComplexMatrix m(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                m(j, k) = binom_gamma(alpha + beta, beta + Complex(static_cast<double>(k - j)));
        out.value = det(m);
    } else {
        if (!detail::is_nonnegative_integer(alpha) || !detail::is_nonnegative_integer(beta))
            throw DomainError(
                "fisher_hartwig_standard: barnes_g variant needs non-negative integer exponents");
        Complex lg = Complex(barnes_g_log(n + 1));
        for (int k = 0; k < n; ++k) {
            lg += log_gamma(alpha + beta + Complex(static_cast<double>(1 + k)));
            lg -= log_gamma(alpha + Complex(static_cast<double>(1 + k)));
            lg -= log_gamma(beta + Complex(static_cast<double>(1 + k)));
        }
        out.value = std::exp(lg);
    }
    out.diag.normalization = to_string(norm);
    if (norm == Normalization::two_pi_n) {
        const double two_pi = 6.283185307179586476925287;
        for (int i = 0; i < n; ++i) out.value /= two_pi;
    }
    return out;
}

}  // namespace closed
}  // namespace haarint
