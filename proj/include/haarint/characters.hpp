#pragma once

#include <vector>

#include "haarint/det_ratio.hpp"
#include "haarint/partitions.hpp"
#include "haarint/special_functions.hpp"

namespace haarint {

// Irreducible U(N) character by the ratio-of-determinants formula
// chi_r(t) = det[t_j^{n_k + N - k}] / det[t_j^{N - k}], evaluated through the
// confluent det_ratio so degenerate spectra (including the identity, where
// the value is the dimension) need no special casing.
inline Complex schur_char(const std::vector<int>& partition, const Spectrum& t) {
    const int n = t.size();
    if (static_cast<int>(partition.size()) != n)
        throw DimensionError("schur_char: partition length must match spectrum size");
    if (!is_partition(partition)) throw DomainError("schur_char: parts must be weakly decreasing");
    std::vector<DerivFn> funcs(n);
    for (int j = 0; j < n; ++j) {
        int m = partition[j] + n - 1 - j;
        funcs[j] = [m](int p, Complex z) { return detail::monomial_taylor(m, p, z) *
                                                  detail::factorial(p); };
    }
    return det_ratio(funcs, t).value;
}

enum class DimVariant { weyl, gamma_table, binomial_table };

// Dimension of the U(N) irrep labeled by a partition.
// weyl:           prod_{j<k} (m_j - m_k) / prod_j (N-j)!            with m_j = n_j + N - j
// gamma_table:    det[1/Gamma(n_k + j - k + 1)] * prod_j m_j!/(N-j)!
// binomial_table: det[binom(alpha, n_k + j - k)] * prod_j m_j! Gamma(alpha - n_j + j)
//                 / ((N-j)! Gamma(alpha + N - j + 1))   for any alpha off the poles
inline Complex dim_rep(const std::vector<int>& partition, int n,
                       DimVariant variant = DimVariant::weyl, Complex alpha = 2.5) {
    if (static_cast<int>(partition.size()) != n)
        throw DimensionError("dim_rep: partition length must match N");
    if (!is_partition(partition)) throw DomainError("dim_rep: parts must be weakly decreasing");
    std::vector<long> m(n);
    for (int j = 0; j < n; ++j) m[j] = partition[j] + n - 1 - j;  // strictly decreasing

    if (variant == DimVariant::weyl) {
        double log_d = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) log_d += std::log(static_cast<double>(m[j] - m[k]));
        double log_super = 0.0, log_f = 0.0;
        for (int j = 1; j < n; ++j) {
            log_f += std::log(static_cast<double>(j));
            log_super += log_f;  // accumulates log((N-1)!) + ... pattern over j
        }
        return std::exp(log_d - log_super);
    }

    if (variant == DimVariant::gamma_table) {
        ComplexMatrix t(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                long arg = partition[k] + j - k;  // n_k + j - k with 0-indexed j,k
                t(j, k) = (arg < 0) ? 0.0 : std::exp(-log_gamma(static_cast<double>(arg + 1)));
            }
        LogComplex d = det_log(t);
        for (int j = 0; j < n; ++j) {
            d *= LogComplex::exp_of(log_gamma(static_cast<double>(m[j] + 1)) -
                                    log_gamma(static_cast<double>(n - j)));
        }
        return d.value();
    }

    ComplexMatrix t(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            long low = partition[k] + j - k;
            t(j, k) = (low < 0) ? 0.0 : gen_binomial(alpha, static_cast<int>(low));
        }
    LogComplex d = det_log(t);
    for (int j = 0; j < n; ++j) {
        Complex lg = log_gamma(static_cast<double>(m[j] + 1)) -
                     log_gamma(static_cast<double>(n - j)) +
                     log_gamma(alpha - static_cast<double>(partition[j]) +
                               static_cast<double>(j + 1)) -
                     log_gamma(alpha + static_cast<double>(n - j));
        d *= LogComplex::exp_of(lg);
    }
    return d.value();
}

}  // namespace haarint
