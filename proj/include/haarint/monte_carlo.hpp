#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "haarint/eigen.hpp"
#include "haarint/sampling.hpp"
#include "haarint/special_functions.hpp"

namespace haarint {

struct McEstimate {
    Complex mean;
    double std_error = 0.0;
    long n_samples = 0;
    bool flagged = false;
    std::vector<std::string> notes;
};

struct McOptions {
    uint64_t seed = 1;
    uint64_t stream_id = 0;
    int threads = 0;        // 0: HAARINT_THREADS env var, else hardware threads
    long chunk_size = 16384;
    bool median_of_means = false;
};

namespace detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HAARINT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct ChunkStat {
    Complex sum{0.0, 0.0};
    double sumsq_re = 0.0;
    double sumsq_im = 0.0;
    long n = 0;
};

// Deterministic chunked driver: chunk c always consumes the stream
// (seed, stream_id + c), partial results merge in chunk order, so the
// estimate is a pure function of (seed, stream_id, n) whatever the thread
// count or scheduling.
template <typename MakeSampler>
McEstimate mc_run(long n_samples, const McOptions& opt, MakeSampler make_sampler) {
    if (n_samples < 1) throw DomainError("mc: need at least one sample");
    const long chunk = std::max<long>(1, opt.chunk_size);
    const long n_chunks = (n_samples + chunk - 1) / chunk;
    std::vector<ChunkStat> stats(static_cast<size_t>(n_chunks));

    auto run_chunk = [&](long c) {
        RngStream rng(opt.seed, opt.stream_id + static_cast<uint64_t>(c));
        auto sample = make_sampler();
        ChunkStat st;
        const long lo = c * chunk;
        const long hi = std::min(n_samples, lo + chunk);
        for (long i = lo; i < hi; ++i) {
            Complex z = sample(rng);
            st.sum += z;
            st.sumsq_re += z.real() * z.real();
            st.sumsq_im += z.imag() * z.imag();
        }
        st.n = hi - lo;
        stats[static_cast<size_t>(c)] = st;
    };

    int workers = std::min<long>(resolve_threads(opt.threads), n_chunks);
    if (workers <= 1) {
        for (long c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (long c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
                    run_chunk(c);
            });
        for (auto& t : pool) t.join();
    }

    McEstimate est;
    est.n_samples = n_samples;
    Complex total{0.0, 0.0};
    double ssq_re = 0.0, ssq_im = 0.0;
    for (const ChunkStat& st : stats) {
        total += st.sum;
        ssq_re += st.sumsq_re;
        ssq_im += st.sumsq_im;
    }
    const double n = static_cast<double>(n_samples);
    est.mean = total / n;
    if (n_samples > 1) {
        double var_re = std::max(0.0, (ssq_re - total.real() * total.real() / n) / (n - 1.0));
        double var_im = std::max(0.0, (ssq_im - total.imag() * total.imag() / n) / (n - 1.0));
        est.std_error = std::sqrt((var_re + var_im) / n);
    }

    if (opt.median_of_means && n_chunks >= 4) {
        const long groups = std::min<long>(32, n_chunks);
        std::vector<double> gre, gim;
        gre.reserve(groups);
        gim.reserve(groups);
        for (long g = 0; g < groups; ++g) {
            long lo = g * n_chunks / groups, hi = (g + 1) * n_chunks / groups;
            Complex s{0.0, 0.0};
            long cnt = 0;
            for (long c = lo; c < hi; ++c) {
                s += stats[static_cast<size_t>(c)].sum;
                cnt += stats[static_cast<size_t>(c)].n;
            }
            gre.push_back(s.real() / cnt);
            gim.push_back(s.imag() / cnt);
        }
        auto median = [](std::vector<double> v) {
            size_t mid = v.size() / 2;
            std::nth_element(v.begin(), v.begin() + mid, v.end());
            double hi = v[mid];
            if (v.size() % 2 == 0) {
                std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
                return 0.5 * (hi + v[mid - 1]);
            }
            return hi;
        };
        double med_re = median(gre), med_im = median(gim);
        std::vector<double> dev_re, dev_im;
        for (size_t i = 0; i < gre.size(); ++i) {
            dev_re.push_back(std::abs(gre[i] - med_re));
            dev_im.push_back(std::abs(gim[i] - med_im));
        }
        double mad_re = median(dev_re), mad_im = median(dev_im);
        est.mean = {med_re, med_im};
        double g = static_cast<double>(groups);
        est.std_error = 1.4826 * std::sqrt((mad_re * mad_re + mad_im * mad_im) / g);
        est.flagged = true;
        est.notes.push_back("median-of-means over " + std::to_string(groups) +
                            " groups; spread from MAD, not a CLT error bar");
    }
    return est;
}

// det of a small matrix by in-place partial-pivot elimination; destroys m.
inline Complex det_destructive(ComplexMatrix& m) {
    const int n = m.rows();
    Complex d = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(m(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(m(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != k) {
            for (int j = k; j < n; ++j) std::swap(m(k, j), m(piv, j));
            d = -d;
        }
        d *= m(k, k);
        for (int i = k + 1; i < n; ++i) {
            Complex f = m(i, k) / m(k, k);
            for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return d;
}

// det(I + T)^alpha. Integer alpha: plain determinant and an integer power
// (single-valued, no norm restriction). Otherwise: per-eigenvalue principal
// logs of (1 + lambda_i); with the spectral radius of T at most 1 every
// factor stays in the closed right half-disc, where the principal branch is
// the analytic one.
struct OnePlusDetPower {
    Complex alpha;
    bool integer_mode = false;
    long ipow = 0;

    explicit OnePlusDetPower(Complex a) : alpha(a) {
        if (is_real_integer(a)) {
            integer_mode = true;
            ipow = static_cast<long>(std::llround(a.real()));
        }
    }

    Complex eval(ComplexMatrix& t) const {  // destroys t
        const int n = t.rows();
        if (integer_mode) {
            if (ipow == 0) return 1.0;
            for (int i = 0; i < n; ++i) t(i, i) += 1.0;
            Complex d = det_destructive(t);
            Complex r = 1.0;
            for (long i = 0; i < std::labs(ipow); ++i) r *= d;
            return ipow > 0 ? r : 1.0 / r;
        }
        Complex log_sum = 0.0;
        if (n == 1) {
            log_sum = std::log(1.0 + t(0, 0));
        } else if (n == 2) {
            Complex l1, l2;
            eig2x2(t(0, 0), t(0, 1), t(1, 0), t(1, 1), l1, l2);
            log_sum = std::log(1.0 + l1) + std::log(1.0 + l2);
        } else {
            for (Complex l : eigenvalues(t)) log_sum += std::log(1.0 + l);
        }
        return std::exp(alpha * log_sum);
    }
};

inline void require_branch_safe(double norm_product, Complex exponent, const char* who) {
    if (!is_real_integer(exponent) && norm_product > 1.0 + 1e-9)
        throw DomainError(std::string(who) +
                          ": non-integer exponent needs the product norm inside the unit disc");
}

inline bool boundary_heavy_tail(double norm_product, Complex exponent) {
    return !is_real_integer(exponent) && std::abs(norm_product - 1.0) <= 1e-9 &&
           exponent.real() > -1.0 && exponent.real() < 0.0;
}

inline void check_square_same(std::initializer_list<const ComplexMatrix*> ms, const char* who) {
    int n = -1;
    for (const ComplexMatrix* m : ms) {
        if (!m->square()) throw DimensionError(std::string(who) + ": matrices must be square");
        if (n < 0) n = m->rows();
        if (m->rows() != n) throw DimensionError(std::string(who) + ": matrix sizes differ");
    }
}

// adj_left_into: dest = a^dagger * b without forming the adjoint.
inline void adjoint_times_into(ComplexMatrix& dest, const ComplexMatrix& a,
                               const ComplexMatrix& b) {
    const int n = a.rows();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (int k = 0; k < n; ++k) s += std::conj(a(k, i)) * b(k, j);
            dest(i, j) = s;
        }
}

inline Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    Complex t = 0.0;
    const int n = a.rows();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) t += a(i, k) * b(k, i);
    return t;
}

}  // namespace detail

namespace mc {

// E_U det(1 + U^dag D)^alpha exp(Tr(A U)) over Haar U.
inline McEstimate ingham_siegel_1(const ComplexMatrix& a, const ComplexMatrix& d, Complex alpha,
                                  long n_samples, McOptions opt = {}) {
    detail::check_square_same({&a, &d}, "mc ingham_siegel_1");
    const int n = a.rows();
    const double nd = operator_norm(d);
    detail::require_branch_safe(nd, alpha, "mc ingham_siegel_1");
    if (detail::boundary_heavy_tail(nd, alpha)) opt.median_of_means = true;
    detail::OnePlusDetPower pw(alpha);
    McEstimate est = detail::mc_run(n_samples, opt, [&, n] {
        return [n, a, d, pw, haar = HaarSampler(n), u = ComplexMatrix(n, n),
                t = ComplexMatrix(n, n), t2 = ComplexMatrix(n, n)](RngStream& rng) mutable {
            haar.sample(rng, u);
            detail::adjoint_times_into(t, u, d);  // t = U^dag D
            t2 = t;
            Complex w = pw.eval(t2);
            return w * std::exp(detail::trace_of_product(a, u));
        };
    });
    if (detail::boundary_heavy_tail(nd, alpha)) {
        est.flagged = true;
        est.notes.push_back("boundary |D| = 1 with -1 < Re(alpha) < 0: heavy-tailed integrand");
    }
    return est;
}

// E_{U,V} det(1 + V^dag C U^dag D)^alpha exp(Tr(A U B V)).
inline McEstimate ingham_siegel_2(const ComplexMatrix& a, const ComplexMatrix& b,
                                  const ComplexMatrix& c, const ComplexMatrix& d, Complex alpha,
                                  long n_samples, McOptions opt = {}) {
    detail::check_square_same({&a, &b, &c, &d}, "mc ingham_siegel_2");
    const int n = a.rows();
    detail::require_branch_safe(operator_norm(c) * operator_norm(d), alpha,
                                "mc ingham_siegel_2");
    detail::OnePlusDetPower pw(alpha);
    return detail::mc_run(n_samples, opt, [&, n] {
        return [n, a, b, c, d, pw, haar = HaarSampler(n), u = ComplexMatrix(n, n),
                v = ComplexMatrix(n, n), t1 = ComplexMatrix(n, n), t2 = ComplexMatrix(n, n),
                t3 = ComplexMatrix(n, n)](RngStream& rng) mutable {
            haar.sample(rng, u);
            haar.sample(rng, v);
            detail::adjoint_times_into(t1, u, d);  // U^dag D
            multiply_into(t2, c, t1);              // C U^dag D
            detail::adjoint_times_into(t1, v, t2); // V^dag C U^dag D
            Complex w = pw.eval(t1);
            multiply_into(t2, a, u);
            multiply_into(t3, t2, b);              // A U B
            return w * std::exp(detail::trace_of_product(t3, v));
        };
    });
}

// E_U det(1 + A U)^alpha det(1 + U^dag D)^beta.
inline McEstimate fisher_hartwig_1(const ComplexMatrix& a, const ComplexMatrix& d, Complex alpha,
                                   Complex beta, long n_samples, McOptions opt = {}) {
    detail::check_square_same({&a, &d}, "mc fisher_hartwig_1");
    const int n = a.rows();
    const double na = operator_norm(a), ndm = operator_norm(d);
    detail::require_branch_safe(na, alpha, "mc fisher_hartwig_1");
    detail::require_branch_safe(ndm, beta, "mc fisher_hartwig_1");
    bool heavy = detail::boundary_heavy_tail(na, alpha) || detail::boundary_heavy_tail(ndm, beta);
    if (heavy) opt.median_of_means = true;
    detail::OnePlusDetPower pa(alpha), pb(beta);
    McEstimate est = detail::mc_run(n_samples, opt, [&, n] {
        return [n, a, d, pa, pb, haar = HaarSampler(n), u = ComplexMatrix(n, n),
                t1 = ComplexMatrix(n, n), t2 = ComplexMatrix(n, n)](RngStream& rng) mutable {
            haar.sample(rng, u);
            multiply_into(t1, a, u);
            Complex w1 = pa.eval(t1);
            detail::adjoint_times_into(t2, u, d);
            Complex w2 = pb.eval(t2);
            return w1 * w2;
        };
    });
    if (heavy) {
        est.flagged = true;
        est.notes.push_back("unit-norm source with -1 < Re(exponent) < 0: heavy-tailed integrand");
    }
    return est;
}

// E_{U,V} det(1 + A U B V)^alpha det(1 + V^dag C U^dag D)^beta.
inline McEstimate fisher_hartwig_2(const ComplexMatrix& a, const ComplexMatrix& b,
                                   const ComplexMatrix& c, const ComplexMatrix& d, Complex alpha,
                                   Complex beta, long n_samples, McOptions opt = {}) {
    detail::check_square_same({&a, &b, &c, &d}, "mc fisher_hartwig_2");
    const int n = a.rows();
    detail::require_branch_safe(operator_norm(a) * operator_norm(b), alpha,
                                "mc fisher_hartwig_2");
    detail::require_branch_safe(operator_norm(c) * operator_norm(d), beta,
                                "mc fisher_hartwig_2");
    detail::OnePlusDetPower pa(alpha), pb(beta);
    return detail::mc_run(n_samples, opt, [&, n] {
        return [n, a, b, c, d, pa, pb, haar = HaarSampler(n), u = ComplexMatrix(n, n),
                v = ComplexMatrix(n, n), t1 = ComplexMatrix(n, n), t2 = ComplexMatrix(n, n),
                t3 = ComplexMatrix(n, n)](RngStream& rng) mutable {
            haar.sample(rng, u);
            haar.sample(rng, v);
            multiply_into(t1, a, u);
            multiply_into(t2, t1, b);
            multiply_into(t1, t2, v);  // A U B V
            Complex w1 = pa.eval(t1);
            detail::adjoint_times_into(t1, u, d);
            multiply_into(t2, c, t1);
            detail::adjoint_times_into(t1, v, t2);  // V^dag C U^dag D
            Complex w2 = pb.eval(t1);
            return w1 * w2;
        };
    });
}

// Integrated one-matrix estimator:
// Z_X * E det(1 + V^dag X U^dag D)^alpha exp(Tr(A U X V)) with X drawn from the
// normalized exp(-Tr X^2) density and Z_X its total mass. Only non-negative
// integer alpha is admissible: X is unbounded, so a fractional power of the
// determinant has no canonical branch.
inline McEstimate integrated_is(const ComplexMatrix& a, const ComplexMatrix& d, Complex alpha,
                                long n_samples, McOptions opt = {}) {
    detail::check_square_same({&a, &d}, "mc integrated_is");
    if (!detail::is_nonnegative_integer(alpha))
        throw DomainError("mc integrated_is: exponent must be a non-negative integer");
    const int n = a.rows();
    detail::OnePlusDetPower pw(alpha);
    McEstimate est = detail::mc_run(n_samples, opt, [&, n] {
        return [n, a, d, pw, haar = HaarSampler(n), u = ComplexMatrix(n, n),
                v = ComplexMatrix(n, n), x = ComplexMatrix(n, n), t1 = ComplexMatrix(n, n),
                t2 = ComplexMatrix(n, n), t3 = ComplexMatrix(n, n)](RngStream& rng) mutable {
            gaussian_hermitian(rng, x);
            haar.sample(rng, u);
            haar.sample(rng, v);
            detail::adjoint_times_into(t1, u, d);  // U^dag D
            multiply_into(t2, x, t1);              // X U^dag D
            detail::adjoint_times_into(t1, v, t2); // V^dag X U^dag D
            Complex w = pw.eval(t1);
            multiply_into(t2, a, u);
            multiply_into(t3, t2, x);              // A U X
            return w * std::exp(detail::trace_of_product(t3, v));
        };
    });
    double mass = std::exp(gaussian_hermitian_log_mass(n));
    est.mean *= mass;
    est.std_error *= mass;
    return est;
}

// Integrated two-symbol estimator:
// Z_X * E det(1 + A U X V)^alpha det(1 + V^dag X U^dag D)^beta.
inline McEstimate integrated_fh(const ComplexMatrix& a, const ComplexMatrix& d, Complex alpha,
                                Complex beta, long n_samples, McOptions opt = {}) {
    detail::check_square_same({&a, &d}, "mc integrated_fh");
    if (!detail::is_nonnegative_integer(alpha) || !detail::is_nonnegative_integer(beta))
        throw DomainError("mc integrated_fh: exponents must be non-negative integers");
    const int n = a.rows();
    detail::OnePlusDetPower pa(alpha), pb(beta);
    McEstimate est = detail::mc_run(n_samples, opt, [&, n] {
        return [n, a, d, pa, pb, haar = HaarSampler(n), u = ComplexMatrix(n, n),
                v = ComplexMatrix(n, n), x = ComplexMatrix(n, n), t1 = ComplexMatrix(n, n),
                t2 = ComplexMatrix(n, n)](RngStream& rng) mutable {
            gaussian_hermitian(rng, x);
            haar.sample(rng, u);
            haar.sample(rng, v);
            multiply_into(t1, a, u);
            multiply_into(t2, t1, x);
            multiply_into(t1, t2, v);  // A U X V
            Complex w1 = pa.eval(t1);
            detail::adjoint_times_into(t1, u, d);
            multiply_into(t2, x, t1);
            detail::adjoint_times_into(t1, v, t2);  // V^dag X U^dag D
            Complex w2 = pb.eval(t1);
            return w1 * w2;
        };
    });
    double mass = std::exp(gaussian_hermitian_log_mass(n));
    est.mean *= mass;
    est.std_error *= mass;
    return est;
}

}  // namespace mc

}  // namespace haarint
