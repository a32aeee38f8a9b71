#pragma once

#include <cmath>
#include <vector>

#include "haarint/complex_matrix.hpp"
#include "haarint/determinant.hpp"
#include "haarint/rng.hpp"

namespace haarint {

// Haar-distributed unitary: QR of a complex Ginibre matrix with the R-diagonal
// phase normalization U = Q diag(r_jj / |r_jj|) (Mezzadri, Notices AMS 54
// (2007); the phase fix makes the factorization unique and the law exactly
// Haar). Householder reflections keep unitarity at machine precision.
class HaarSampler {
public:
    explicit HaarSampler(int n)
        : n_(n), a_(n, n), v_(n), beta_(n), phase_(n) {
        if (n < 1) throw DimensionError("haar sampler: dimension must be positive");
    }

    void sample(RngStream& rng, ComplexMatrix& u) {
        const int n = n_;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a_(i, j) = rng.complex_normal();

        // Householder sweep; reflector k stored in a_(k..n-1, k) and beta_[k].
        for (int k = 0; k < n; ++k) {
            double norm = 0.0;
            for (int i = k; i < n; ++i) norm = std::hypot(norm, std::abs(a_(i, k)));
            Complex x0 = a_(k, k);
            Complex alpha = (x0 == Complex(0.0)) ? Complex(-norm)
                                                 : -(x0 / std::abs(x0)) * norm;
            double vnorm2 = 0.0;
            for (int i = k; i < n; ++i) {
                v_[i] = a_(i, k) - ((i == k) ? alpha : Complex(0.0));
                vnorm2 += std::norm(v_[i]);
            }
            if (vnorm2 == 0.0) {
                beta_[k] = 0.0;
                phase_[k] = 1.0;
                continue;
            }
            double beta = 2.0 / vnorm2;
            beta_[k] = beta;
            for (int i = k; i < n; ++i) a_(i, k) = v_[i];
            for (int j = k + 1; j < n; ++j) {
                Complex dot = 0.0;
                for (int i = k; i < n; ++i) dot += std::conj(a_(i, k)) * a_(i, j);
                dot *= beta;
                for (int i = k; i < n; ++i) a_(i, j) -= dot * a_(i, k);
            }
            // R diagonal entry is alpha; record its phase.
            phase_[k] = (alpha == Complex(0.0)) ? Complex(1.0) : alpha / std::abs(alpha);
        }

        // U = H_0 ... H_{n-1} diag(phase): start from the phase matrix and
        // apply reflectors in reverse.
        if (u.rows() != n || u.cols() != n) u = ComplexMatrix(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) u(i, j) = (i == j) ? phase_[i] : Complex(0.0);
        for (int k = n - 1; k >= 0; --k) {
            if (beta_[k] == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                Complex dot = 0.0;
                for (int i = k; i < n; ++i) dot += std::conj(a_(i, k)) * u(i, j);
                dot *= beta_[k];
                for (int i = k; i < n; ++i) u(i, j) -= dot * a_(i, k);
            }
        }
    }

    int dim() const { return n_; }

private:
    int n_;
    ComplexMatrix a_;
    std::vector<Complex> v_;
    std::vector<double> beta_;
    std::vector<Complex> phase_;
};

// Hermitian matrix with density proportional to exp(-Tr X^2):
// X_ii ~ N(0, 1/2), off-diagonal real and imaginary parts ~ N(0, 1/4),
// so E[Tr X^2] = n^2 / 2.
inline void gaussian_hermitian(RngStream& rng, ComplexMatrix& x) {
    const int n = x.rows();
    const double inv_sqrt2 = 0.70710678118654752440;
    for (int i = 0; i < n; ++i) {
        x(i, i) = rng.normal() * inv_sqrt2;
        for (int j = i + 1; j < n; ++j) {
            Complex z = 0.5 * rng.complex_normal();
            x(i, j) = z;
            x(j, i) = std::conj(z);
        }
    }
}

// Total mass of exp(-Tr X^2) over the Lebesgue measure on Hermitian matrices,
// in log form: n/2 log(pi) + n(n-1)/2 log(pi/2).
inline double gaussian_hermitian_log_mass(int n) {
    const double pi = 3.14159265358979323846;
    return 0.5 * n * std::log(pi) + 0.5 * n * (n - 1) * std::log(0.5 * pi);
}

// Largest singular value by power iteration on M^dagger M; deterministic
// start vector, relative tolerance 1e-12, bounded sweeps.
inline double operator_norm(const ComplexMatrix& m, int max_iter = 500) {
    const int n = m.rows();
    std::vector<Complex> v(n, Complex(1.0, 0.0)), w(n), t(n);
    double prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        for (int i = 0; i < n; ++i) {
            Complex s = 0.0;
            for (int j = 0; j < n; ++j) s += m(i, j) * v[j];
            w[i] = s;
        }
        for (int j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (int i = 0; i < n; ++i) s += std::conj(m(i, j)) * w[i];
            t[j] = s;
        }
        double nrm = 0.0;
        for (int j = 0; j < n; ++j) nrm += std::norm(t[j]);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        double est = std::sqrt(nrm);
        for (int j = 0; j < n; ++j) v[j] = t[j] / nrm;
        if (it > 2 && std::abs(est - prev) <= 1e-12 * est) return est;
        prev = est;
    }
    return prev;
}

// Smallest singular value via inverse power iteration with an LU solve.
inline double smallest_singular_value(const ComplexMatrix& m, int max_iter = 200) {
    const int n = m.rows();
    LuFactors f = lu_factor(m);
    if (f.singular) return 0.0;
    LuFactors fa = lu_factor(m.adjoint());
    std::vector<Complex> v(n, Complex(1.0, 0.0));
    double prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        lu_solve(f, v);   // v <- M^-1 v
        lu_solve(fa, v);  // v <- M^-dagger v
        double nrm = 0.0;
        for (int j = 0; j < n; ++j) nrm += std::norm(v[j]);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        double est = 1.0 / std::sqrt(nrm);
        for (int j = 0; j < n; ++j) v[j] /= nrm;
        if (it > 2 && std::abs(est - prev) <= 1e-10 * est) return est;
        prev = est;
    }
    return prev;
}

// Random source matrix: complex Ginibre rescaled so the operator norm lands
// uniformly in [norm_bound/2, norm_bound]; draws are rejected while the
// smallest singular value sits below 1e-8 (all through the same stream, so
// the output is a deterministic function of (seed, stream)).
inline ComplexMatrix gen_matrix(int n, double norm_bound, RngStream& rng) {
    if (n < 1 || n > 64) throw DimensionError("gen_matrix: dimension must be in [1, 64]");
    if (!(norm_bound > 0.0)) throw DomainError("gen_matrix: norm bound must be positive");
    for (int attempt = 0; attempt < 64; ++attempt) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
        double target = norm_bound * (0.5 + 0.5 * rng.uniform());
        double nrm = operator_norm(m);
        if (nrm == 0.0) continue;
        double scale = target / nrm;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) *= scale;
        if (smallest_singular_value(m) >= 1e-8) return m;
    }
    throw NumericalError("gen_matrix: could not draw a well-conditioned matrix", 0.0);
}

}  // namespace haarint
