#pragma once

#include <cmath>
#include <numbers>

#include "haarint/errors.hpp"
#include "haarint/log_complex.hpp"

namespace haarint {

namespace detail {

inline bool is_real_integer(Complex z, double tol = 1e-12) {
    return std::abs(z.imag()) <= tol &&
           std::abs(z.real() - std::round(z.real())) <= tol * std::max(1.0, std::abs(z.real()));
}

inline bool is_nonpositive_integer(Complex z, double tol = 1e-12) {
    return is_real_integer(z, tol) && std::round(z.real()) <= 0.0;
}

inline bool is_nonnegative_integer(Complex z, double tol = 1e-12) {
    return is_real_integer(z, tol) && std::round(z.real()) >= 0.0;
}

// Lanczos approximation, g = 607/128, 15 terms (coefficients from Godfrey's
// 2001 note; the same set is used across many open-source gamma
// implementations). Relative error below ~1e-14 for Re z >= 0.5.
inline Complex lanczos_sum(Complex z) {
    static const double c[15] = {
        0.99999999999999709182,     57.156235665862923517,
        -59.597960355475491248,     14.136097974741747174,
        -0.49191381609762019978,    0.33994649984811888699e-4,
        0.46523628927048575665e-4,  -0.98374475304879564677e-4,
        0.15808870322491248884e-3,  -0.21026444172410488319e-3,
        0.21743961811521264320e-3,  -0.16431810653676389022e-3,
        0.84418223983852743293e-4,  -0.26190838401581408670e-4,
        0.36899182659531622704e-5,
    };
    Complex s = c[0];
    for (int k = 1; k < 15; ++k) s += c[k] / (z - 1.0 + static_cast<double>(k));
    return s;
}

}  // namespace detail

// Principal-branch log Gamma. Poles at non-positive integers raise PoleError
// carrying the integer location.
inline Complex log_gamma(Complex z) {
    if (detail::is_nonpositive_integer(z, 0.0) ||
        (z.imag() == 0.0 && z.real() == std::round(z.real()) && z.real() <= 0.0))
        throw PoleError("log_gamma: pole at non-positive integer", z.real());
    constexpr double g = 4.7421875;  // 607/128
    constexpr double half_log_2pi = 0.91893853320467274178;
    if (z.real() >= 0.5) {
        Complex t = z + (g - 0.5);
        return half_log_2pi + (z - 0.5) * std::log(t) - t + std::log(detail::lanczos_sum(z));
    }
    // Reflection; |Im(pi z)| stays far below the overflow threshold for the
    // |z| <= 50 domain this library works in.
    const double pi = std::numbers::pi;
    Complex w = 1.0 - z;
    Complex tw = w + (g - 0.5);
    Complex lg1mz = half_log_2pi + (w - 0.5) * std::log(tw) - tw +
                    std::log(detail::lanczos_sum(w));
    return std::log(pi) - std::log(std::sin(pi * z)) - lg1mz;
}

inline Complex gamma_fn(Complex z) { return std::exp(log_gamma(z)); }

// (alpha)_n = alpha (alpha+1) ... (alpha+n-1), product form.
inline Complex pochhammer(Complex alpha, int n) {
    if (n < 0) throw DomainError("pochhammer: order must be non-negative");
    Complex p = 1.0;
    for (int i = 0; i < n; ++i) p *= alpha + static_cast<double>(i);
    return p;
}

// Generalized binomial coefficient binom(alpha, k) = (alpha)(alpha-1)...(alpha-k+1)/k!
// evaluated as a running product, so integer alpha < k gives an exact zero and
// no Gamma poles are ever touched. Negative k is outside the contract;
// determinant builders that need binom at negative lower index map it to 0
// themselves.
inline Complex gen_binomial(Complex alpha, int k) {
    if (k < 0) throw DomainError("gen_binomial: negative lower index");
    Complex b = 1.0;
    for (int i = 0; i < k; ++i) b *= (alpha - static_cast<double>(i)) / (i + 1.0);
    return b;
}

// binom(x, y) for complex upper and lower index through Gamma functions:
// Gamma(x+1) / (Gamma(y+1) Gamma(x-y+1)), with the 1/Gamma(pole) = 0 limit.
inline Complex binom_gamma(Complex x, Complex y) {
    if (detail::is_nonpositive_integer(x + 1.0))
        throw DomainError("binom_gamma: upper index at a Gamma pole");
    bool py = detail::is_nonpositive_integer(y + 1.0);
    bool pxy = detail::is_nonpositive_integer(x - y + 1.0);
    if (py || pxy) return 0.0;
    return std::exp(log_gamma(x + 1.0) - log_gamma(y + 1.0) - log_gamma(x - y + 1.0));
}

// log of the Barnes G function at a positive integer:
// G(1) = G(2) = 1, G(n+1) = Gamma(n) G(n), so log G(n) = sum_{k=1}^{n-2} log k!.
inline double barnes_g_log(int n) {
    if (n < 1) throw DomainError("barnes_g_log: argument must be a positive integer");
    double s = 0.0;
    double log_kfact = 0.0;
    for (int k = 1; k <= n - 2; ++k) {
        log_kfact += std::log(static_cast<double>(k));
        s += log_kfact;
    }
    return s;
}

struct ConvolutionCheck {
    Complex lhs;  // truncated sum over k of binom(alpha, m+k) binom(beta, k)
    Complex rhs;  // binom(alpha+beta, beta+m) in Gamma form
};

// Vandermonde-type binomial convolution: sum_k binom(alpha, m+k) binom(beta, k)
// against its closed form. Requires Re(alpha+beta) > -1 so the sum converges,
// and a cutoff of at least |m| + 10. Terms with m + k < 0 contribute zero.
inline ConvolutionCheck binom_convolution_check(Complex alpha, Complex beta, int m,
                                                long cutoff) {
    if (alpha.real() + beta.real() <= -1.0)
        throw DomainError("binom_convolution_check: Re(alpha+beta) must exceed -1");
    if (cutoff < std::abs(m) + 10)
        throw DomainError("binom_convolution_check: cutoff below |m| + 10");
    ConvolutionCheck r;
    long k0 = std::max(0L, static_cast<long>(-m));
    Complex ba = gen_binomial(alpha, static_cast<int>(m + k0));
    Complex bb = gen_binomial(beta, static_cast<int>(k0));
    Complex s = 0.0;
    for (long k = k0; k <= cutoff; ++k) {
        s += ba * bb;
        ba *= (alpha - static_cast<double>(m + k)) / static_cast<double>(m + k + 1);
        bb *= (beta - static_cast<double>(k)) / static_cast<double>(k + 1);
    }
    r.lhs = s;
    r.rhs = binom_gamma(alpha + beta, beta + static_cast<double>(m));
    return r;
}

}  // namespace haarint
