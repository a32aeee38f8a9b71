#pragma once

#include <cmath>
#include <string>

#include "haarint/characters.hpp"
#include "haarint/eval_result.hpp"

namespace haarint {

// Truncation policy for the character-expansion oracles: sum every partition
// with first part at most M, doubling M from `initial_cutoff` until the last
// shell (partitions with first part in (M/2, M]) contributes less than
// tail_tol of the accumulated sum. Non-decreasing shell magnitudes across a
// doubling signal divergence.
struct CharSumControl {
    int initial_cutoff = 8;
    int max_cutoff = 512;
    double tail_tol = 1e-13;
};

namespace detail {

// det[1/Gamma(n_k + j - k + 1)] over 1-indexed j,k; entries at non-positive
// Gamma arguments vanish.
inline Complex gamma_table_det(const std::vector<int>& r, int n) {
    ComplexMatrix t(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            long arg = r[k] + j - k;
            t(j, k) = (arg < 0) ? 0.0 : std::exp(-log_gamma(static_cast<double>(arg + 1)));
        }
    return det(t);
}

// det[binom(alpha, n_k + j - k)]; negative lower index contributes zero.
inline Complex binom_table_det(const std::vector<int>& r, int n, Complex alpha) {
    ComplexMatrix t(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            long low = r[k] + j - k;
            t(j, k) = (low < 0) ? 0.0 : gen_binomial(alpha, static_cast<int>(low));
        }
    return det(t);
}

enum class SumKind { is1, is2, fh1, fh2 };

inline EvalResult char_sum_core(SumKind kind, const Spectrum& mu2, const Spectrum* nu2,
                                Complex alpha, Complex beta, const CharSumControl& ctl) {
    const int n = mu2.size();
    if (nu2 && nu2->size() != n)
        throw DimensionError("character sum: spectra sizes differ");

    double mu_max = 0.0, nu_max = 0.0;
    for (const Complex& v : mu2.values) mu_max = std::max(mu_max, std::abs(v));
    if (nu2)
        for (const Complex& v : nu2->values) nu_max = std::max(nu_max, std::abs(v));

    // IS-type sums carry 1/m_j! decay and tolerate the closed unit disc
    // (needed by the nu^2 = 1 reduction identities); FH-type sums are
    // 2F1-like with radius given by the product of the spectral radii.
    const double slack = 1e-12;
    if (kind == SumKind::is1 || kind == SumKind::is2) {
        if (mu_max > 1.0 + slack || (nu2 && nu_max > 1.0 + slack))
            throw DomainError("character sum: spectrum outside the closed unit disc");
    } else if (kind == SumKind::fh1) {
        if (mu_max >= 1.0 - slack)
            throw DomainError("character sum: FH spectrum must satisfy max|mu^2| < 1");
    } else {
        if (mu_max > 1.0 + slack || nu_max > 1.0 + slack || mu_max * nu_max >= 1.0 - slack)
            throw DomainError("character sum: FH spectra need max|mu^2| * max|nu^2| < 1");
    }

    EvalResult out;
    Complex sum = 0.0;
    long terms = 0;
    double prev_shell = -1.0;
    int shell_lo = -1;  // first parts in [shell_lo+1, M] are new in this pass
    int m = ctl.initial_cutoff;
    while (true) {
        double shell_mag = 0.0;
        PartitionGenerator gen(n, m);
        for (; !gen.done(); gen.advance()) {
            const std::vector<int>& r = gen.current();
            if (r[0] <= shell_lo) continue;
            Complex summand;
            Complex d = dim_rep(r, n, DimVariant::weyl);
            Complex chi_mu = schur_char(r, mu2);
            switch (kind) {
                case SumKind::is1:
                    summand = gamma_table_det(r, n) * binom_table_det(r, n, alpha) * chi_mu / d;
                    break;
                case SumKind::is2:
                    summand = gamma_table_det(r, n) * binom_table_det(r, n, alpha) * chi_mu *
                              schur_char(r, *nu2) / (d * d);
                    break;
                case SumKind::fh1:
                    summand = binom_table_det(r, n, alpha) * binom_table_det(r, n, beta) *
                              chi_mu / d;
                    break;
                case SumKind::fh2:
                    summand = binom_table_det(r, n, alpha) * binom_table_det(r, n, beta) *
                              chi_mu * schur_char(r, *nu2) / (d * d);
                    break;
            }
            sum += summand;
            shell_mag += std::abs(summand);
            ++terms;
        }
        if (shell_mag <= ctl.tail_tol * std::max(std::abs(sum), 1e-300)) {
            out.diag.truncation_cutoff = m;
            out.diag.tail_estimate = shell_mag / std::max(std::abs(sum), 1e-300);
            break;
        }
        if (prev_shell >= 0.0 && shell_mag >= prev_shell)
            throw ConvergenceError("character sum: shell magnitudes stopped decreasing",
                                   shell_mag);
        if (m >= ctl.max_cutoff)
            throw ConvergenceError("character sum: cutoff cap reached before the tail fell below tolerance",
                                   shell_mag / std::max(std::abs(sum), 1e-300));
        prev_shell = shell_mag;
        shell_lo = m;
        m = std::min(2 * m, ctl.max_cutoff);
    }
    out.value = sum;
    out.diag.terms_used = terms;
    return out;
}

}  // namespace detail

namespace charsum {

// sum_r det[1/Gamma(n_k+j-k+1)] det[binom(alpha, n_k+j-k)] chi_r(mu^2) / d_r
inline EvalResult ingham_siegel_1(const Spectrum& mu2, Complex alpha,
                                  const CharSumControl& ctl = {}) {
    return detail::char_sum_core(detail::SumKind::is1, mu2, nullptr, alpha, 0.0, ctl);
}

// sum_r det[1/Gamma] det[binom(alpha)] chi_r(mu^2) chi_r(nu^2) / d_r^2
inline EvalResult ingham_siegel_2(const Spectrum& mu2, const Spectrum& nu2, Complex alpha,
                                  const CharSumControl& ctl = {}) {
    return detail::char_sum_core(detail::SumKind::is2, mu2, &nu2, alpha, 0.0, ctl);
}

// sum_r det[binom(alpha)] det[binom(beta)] chi_r(mu^2) / d_r
inline EvalResult fisher_hartwig_1(const Spectrum& mu2, Complex alpha, Complex beta,
                                   const CharSumControl& ctl = {}) {
    return detail::char_sum_core(detail::SumKind::fh1, mu2, nullptr, alpha, beta, ctl);
}

// sum_r det[binom(alpha)] det[binom(beta)] chi_r(mu^2) chi_r(nu^2) / d_r^2
inline EvalResult fisher_hartwig_2(const Spectrum& mu2, const Spectrum& nu2, Complex alpha,
                                   Complex beta, const CharSumControl& ctl = {}) {
    return detail::char_sum_core(detail::SumKind::fh2, mu2, &nu2, alpha, beta, ctl);
}

}  // namespace charsum

struct CauchyBinetCheck {
    Complex lhs;  // sum over strictly decreasing index tuples of det * det
    Complex rhs;  // det of the truncated product table
};

// Finite Cauchy-Binet identity on caller-supplied coefficient tables
// a(j, m), b(j, m), j = 0..n-1, m = 0..cutoff:
//   sum_{cutoff >= m_1 > ... > m_n >= 0} det[a(j, m_k)] det[b(j, m_k)]
//     = det[ sum_m a(j, m) b(k, m) ].
// Both sides use the same truncation, so they agree to rounding.
inline CauchyBinetCheck cauchy_binet_check(
    const std::function<Complex(int, long)>& a, const std::function<Complex(int, long)>& b,
    int n, long cutoff) {
    if (n < 1 || cutoff + 1 < n)
        throw DimensionError("cauchy_binet_check: need cutoff + 1 >= n >= 1");
    CauchyBinetCheck out;
    // Right side: n x n Gram-style table.
    ComplexMatrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Complex s = 0.0;
            for (long m = 0; m <= cutoff; ++m) s += a(j, m) * b(k, m);
            g(j, k) = s;
        }
    out.rhs = det(g);
    // Left side: every ascending n-subset c_0 < ... < c_{n-1} of {0..cutoff};
    // the descending tuple is its reverse.
    std::vector<long> c(n);
    for (int j = 0; j < n; ++j) c[j] = j;
    Complex lhs = 0.0;
    ComplexMatrix ma(n, n), mb(n, n);
    while (true) {
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                long m = c[n - 1 - k];
                ma(j, k) = a(j, m);
                mb(j, k) = b(j, m);
            }
        lhs += det(ma) * det(mb);
        int i = n - 1;
        while (i >= 0 && c[i] == cutoff - (n - 1 - i)) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < n; ++j) c[j] = c[j - 1] + 1;
    }
    out.lhs = lhs;
    return out;
}

}  // namespace haarint
