#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "haarint/closed_form.hpp"
#include "haarint/pfaffian.hpp"
#include "haarint/quadrature.hpp"

namespace haarint {

// Weight d mu(x) on the real line: either exp(-x^2) on R (Gauss-Hermite) or a
// caller-supplied density on [lo, hi] (Gauss-Legendre).
struct WeightSpec {
    bool gaussian = true;
    double lo = -1.0;
    double hi = 1.0;
    std::function<double(double)> density;
};

inline QuadratureRule weighted_rule(const WeightSpec& w, int order) {
    if (w.gaussian) return gauss_hermite(order);
    if (!w.density) throw DomainError("weighted_rule: non-gaussian weight needs a density");
    QuadratureRule r = gauss_legendre(order, w.lo, w.hi);
    for (int i = 0; i < r.order(); ++i) r.weights[static_cast<size_t>(i)] *= w.density(r.nodes[static_cast<size_t>(i)]);
    return r;
}

// Family of even functions phi_j(x) = phi_j(-x) with their x-derivatives.
struct PhiFamily {
    int count = 0;
    std::function<Complex(int, double)> phi;
    std::function<Complex(int, double)> dphi;
};

// Which first argument the one-matrix kernel uses: standard is -alpha-N+1;
// offset_by_one shifts it up by one.
enum class KernelArg { standard, offset_by_one };

struct PfaffianRouteOptions {
    int quad_order = 80;
    KernelArg is_arg = KernelArg::standard;
    WeightSpec weight{};
};

namespace ipdetail {

struct PhiTables {
    // value[j][node] on the x-rule and y-rule
    std::vector<std::vector<Complex>> on_x, on_y;
};

inline PhiTables tabulate(const PhiFamily& fam, const QuadratureRule& rx,
                          const QuadratureRule& ry) {
    PhiTables t;
    t.on_x.resize(static_cast<size_t>(fam.count));
    t.on_y.resize(static_cast<size_t>(fam.count));
    for (int j = 0; j < fam.count; ++j) {
        auto& vx = t.on_x[static_cast<size_t>(j)];
        auto& vy = t.on_y[static_cast<size_t>(j)];
        vx.resize(rx.nodes.size());
        vy.resize(ry.nodes.size());
        for (size_t a = 0; a < rx.nodes.size(); ++a) vx[a] = fam.phi(j, rx.nodes[a]);
        for (size_t b = 0; b < ry.nodes.size(); ++b) vy[b] = fam.phi(j, ry.nodes[b]);
    }
    return t;
}

// (1/2) int int d mu(x) d mu(y) (x-y)/(x+y) [phi_j(x)phi_k(y) - phi_k(x)phi_j(y)]
// from precomputed tables. Near the removable line x = -y the integrand is
// replaced by its analytic limit -(x-y)[phi_j dphi_k - phi_k dphi_j](m),
// m = (x-y)/2.
inline Complex e_from_tables(const PhiFamily& fam, int j, int k, const QuadratureRule& rx,
                             const QuadratureRule& ry, const PhiTables& t) {
    Complex sum = 0.0;
    const auto& pjx = t.on_x[static_cast<size_t>(j)];
    const auto& pkx = t.on_x[static_cast<size_t>(k)];
    const auto& pjy = t.on_y[static_cast<size_t>(j)];
    const auto& pky = t.on_y[static_cast<size_t>(k)];
    for (size_t a = 0; a < rx.nodes.size(); ++a) {
        const double x = rx.nodes[a];
        const double wx = rx.weights[a];
        for (size_t b = 0; b < ry.nodes.size(); ++b) {
            const double y = ry.nodes[b];
            const double delta = 1e-8 * (1.0 + std::abs(x) + std::abs(y));
            Complex term;
            if (std::abs(x + y) < delta) {
                const double m = 0.5 * (x - y);
                term = -(x - y) * (fam.phi(j, m) * fam.dphi(k, m) - fam.phi(k, m) * fam.dphi(j, m));
            } else {
                term = (x - y) / (x + y) * (pjx[a] * pky[b] - pkx[a] * pjy[b]);
            }
            sum += wx * ry.weights[b] * term;
        }
    }
    return 0.5 * sum;
}

inline Complex f_from_rule(const PhiFamily& fam, int j, const QuadratureRule& r) {
    Complex sum = 0.0;
    for (size_t a = 0; a < r.nodes.size(); ++a) sum += r.weights[a] * fam.phi(j, r.nodes[a]);
    return sum;
}

// Skew matrix of pair moments, bordered by single moments when count is odd.
inline ComplexMatrix moment_matrix(const PhiFamily& fam, const WeightSpec& w, int order) {
    const QuadratureRule rx = weighted_rule(w, order);
    const QuadratureRule ry = weighted_rule(w, order + 1);
    const PhiTables t = tabulate(fam, rx, ry);
    const int n = fam.count;
    const bool odd = n % 2 != 0;
    const int dim = odd ? n + 1 : n;
    ComplexMatrix m(dim, dim);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            Complex e = e_from_tables(fam, j, k, rx, ry, t);
            m(j, k) = e;
            m(k, j) = -e;
        }
    if (odd) {
        for (int j = 0; j < n; ++j) {
            Complex f = f_from_rule(fam, j, rx);
            m(j, n) = f;
            m(n, j) = -f;
        }
    }
    return m;
}

// pi^{n(n-1)/2} / prod_{j=1}^{n} j!  times  n!
inline LogComplex angular_prefactor_log(int n) {
    const double log_pi = 1.1447298858494001741;
    Complex lg = Complex(0.5 * n * (n - 1) * log_pi);
    for (int j = 1; j <= n; ++j) lg -= log_gamma(Complex(static_cast<double>(j + 1)));
    lg += log_gamma(Complex(static_cast<double>(n + 1)));
    return LogComplex::exp_of(lg);
}

inline PhiFamily one_matrix_family(const std::vector<Complex>& a2, Complex alpha, int n,
                                   KernelArg arg) {
    PhiFamily fam;
    fam.count = static_cast<int>(a2.size());
    const Complex first = arg == KernelArg::standard
                              ? -alpha - Complex(static_cast<double>(n - 1))
                              : -alpha - Complex(static_cast<double>(n - 2));
    SeriesControl ctl;
    fam.phi = [a2, first, ctl](int j, double x) {
        return kummer_1f1(first, Complex(1.0), -a2[static_cast<size_t>(j)] * x * x, ctl);
    };
    fam.dphi = [a2, first, ctl](int j, double x) {
        const Complex s = a2[static_cast<size_t>(j)];
        return -2.0 * s * x * first * kummer_1f1(first + 1.0, Complex(2.0), -s * x * x, ctl);
    };
    return fam;
}

inline PhiFamily two_symbol_family(const std::vector<Complex>& a2, Complex alpha, Complex beta,
                                   int n) {
    PhiFamily fam;
    fam.count = static_cast<int>(a2.size());
    const Complex p = Complex(1.0) - alpha - Complex(static_cast<double>(n));
    const Complex q = Complex(1.0) - beta - Complex(static_cast<double>(n));
    SeriesControl ctl;
    fam.phi = [a2, p, q, ctl](int j, double x) {
        return gauss_2f1(p, q, Complex(1.0), a2[static_cast<size_t>(j)] * x * x, ctl);
    };
    fam.dphi = [a2, p, q, ctl](int j, double x) {
        const Complex s = a2[static_cast<size_t>(j)];
        return 2.0 * s * x * p * q * gauss_2f1(p + 1.0, q + 1.0, Complex(2.0), s * x * x, ctl);
    };
    return fam;
}

struct PerturbPlan {
    std::vector<Complex> base;
    double eps = 0.0;  // 0: no perturbation needed
};

inline PerturbPlan perturb_plan(const Spectrum& a2) {
    PerturbPlan plan;
    plan.base = a2.values;
    if (!a2.degenerate()) return plan;
    double scale = 1.0;
    for (const Complex& v : a2.values) scale = std::max(scale, std::abs(v));
    double gap = -1.0;
    std::vector<Complex> centers;
    for (const auto& cl : a2.clusters) {
        Complex c = 0.0;
        for (int i : cl) c += a2.values[static_cast<size_t>(i)];
        centers.push_back(c / static_cast<double>(cl.size()));
    }
    for (size_t i = 0; i < centers.size(); ++i)
        for (size_t j = i + 1; j < centers.size(); ++j) {
            double d = std::abs(centers[i] - centers[j]);
            if (gap < 0.0 || d < gap) gap = d;
        }
    plan.eps = 1e-3 * scale;
    if (gap > 0.0) plan.eps = std::min(plan.eps, 0.25 * gap);
    return plan;
}

// Symmetric zero-mean spread of each cluster about its center.
inline std::vector<Complex> spread_clusters(const Spectrum& a2, double eps) {
    std::vector<Complex> vals = a2.values;
    for (const auto& cl : a2.clusters) {
        const int m = static_cast<int>(cl.size());
        if (m < 2) continue;
        Complex c = 0.0;
        for (int i : cl) c += a2.values[static_cast<size_t>(i)];
        c /= static_cast<double>(m);
        for (int r = 0; r < m; ++r) {
            double d = (2.0 * r - (m - 1)) / static_cast<double>(m - 1);
            vals[static_cast<size_t>(cl[r])] = c + eps * d;
        }
    }
    return vals;
}

}  // namespace ipdetail

// Pair moment of two family members against the antisymmetric factor
// (x-y)/(x+y); x and y use consecutive quadrature orders so no node pair
// collides on the removable line.
inline Complex e_kernel(const PhiFamily& fam, int j, int k, const WeightSpec& w, int order) {
    const QuadratureRule rx = weighted_rule(w, order);
    const QuadratureRule ry = weighted_rule(w, order + 1);
    const ipdetail::PhiTables t = ipdetail::tabulate(fam, rx, ry);
    return ipdetail::e_from_tables(fam, j, k, rx, ry, t);
}

inline Complex f_kernel(const PhiFamily& fam, int j, const WeightSpec& w, int order) {
    return ipdetail::f_from_rule(fam, j, weighted_rule(w, order));
}

namespace ipdetail {

template <typename FamilyOf>
EvalResult pfaffian_route(const Spectrum& a2, const LogComplex& weight_pre, FamilyOf family_of,
                          const PfaffianRouteOptions& opt) {
    const int n = a2.size();
    if (n < 1) throw DimensionError("pfaffian route: empty spectrum");

    auto value_at = [&](int order) -> Complex {
        auto eval_plain = [&](const std::vector<Complex>& vals) -> Complex {
            PhiFamily fam = family_of(vals);
            ComplexMatrix m = moment_matrix(fam, opt.weight, order);
            LogComplex pf = pfaffian_log(m);
            LogComplex pre = angular_prefactor_log(n) * weight_pre;
            pre /= vandermonde_log(vals);
            return (pre * pf).value();
        };
        PerturbPlan plan = perturb_plan(a2);
        if (plan.eps == 0.0) return eval_plain(plan.base);
        Complex coarse = eval_plain(spread_clusters(a2, plan.eps));
        Complex fine = eval_plain(spread_clusters(a2, 0.5 * plan.eps));
        return (4.0 * fine - coarse) / 3.0;
    };

    EvalResult out;
    out.value = value_at(opt.quad_order);
    Complex doubled = value_at(2 * opt.quad_order);
    out.diag.normalization = to_string(Normalization::unit_mean);
    out.diag.quadrature_order = opt.quad_order;
    out.diag.quadrature_check = std::abs(out.value - doubled) / (1.0 + std::abs(doubled));
    out.diag.clustered = a2.degenerate();
    if (out.diag.clustered)
        out.diag.notes.push_back("confluent spectrum handled by symmetric spread and Richardson step");
    if (out.diag.quadrature_check > 1e-6)
        out.diag.notes.push_back("order-doubling disagreement above 1e-6");
    return out;
}

}  // namespace ipdetail

// X-averaged one-matrix integral: prefactor times Pf of the moment matrix of
// the 1F1 family, divided by the Vandermonde of the source spectrum.
inline EvalResult integrated_ingham_siegel(const Spectrum& a2, Complex alpha,
                                           const PfaffianRouteOptions& opt = {}) {
    if (alpha.real() <= -1.0) throw DomainError("integrated_ingham_siegel: need Re(alpha) > -1");
    const int n = a2.size();
    return ipdetail::pfaffian_route(
        a2, closed::cfdetail::column_weight_log(n, alpha),
        [&, n](const std::vector<Complex>& vals) {
            return ipdetail::one_matrix_family(vals, alpha, n, opt.is_arg);
        },
        opt);
}

// X-averaged two-symbol integral with the 2F1 family.
inline EvalResult integrated_fisher_hartwig(const Spectrum& a2, Complex alpha, Complex beta,
                                            const PfaffianRouteOptions& opt = {}) {
    if ((alpha + beta).real() <= -1.0)
        throw DomainError("integrated_fisher_hartwig: need Re(alpha+beta) > -1");
    const int n = a2.size();
    // two-symbol column weights carry prod (j-1)!^2 once each; the x-averaged
    // formula, like its two-source parent, wants a single copy removed
    // (cross-checked by sampling: at alpha = beta = 0 the value must reduce to
    // the bare Gaussian mass)
    Complex fac_corr = 0.0;
    for (int j = 1; j <= n; ++j) fac_corr += 2.0 * log_gamma(Complex(static_cast<double>(j)));
    const LogComplex pre = closed::cfdetail::column_weight_log(n, alpha) *
                           closed::cfdetail::column_weight_log(n, beta) /
                           LogComplex::exp_of(fac_corr);
    return ipdetail::pfaffian_route(
        a2, pre,
        [&, n](const std::vector<Complex>& vals) {
            return ipdetail::two_symbol_family(vals, alpha, beta, n);
        },
        opt);
}

struct IdentityCheck {
    Complex lhs;
    Complex rhs;
};

// Delta(x)^2 / Delta(x^2)  vs  Pf[(x_j - x_k)/(x_j + x_k)] (even count) or its
// ones-bordered companion (odd count).
inline IdentityCheck schur_pfaff_check(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<Complex> xc(x.begin(), x.end());
    std::vector<Complex> x2(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x2[static_cast<size_t>(i)] = xc[static_cast<size_t>(i)] * xc[static_cast<size_t>(i)];
    IdentityCheck chk;
    LogComplex num = vandermonde_log(xc);
    chk.lhs = (num * num / vandermonde_log(x2)).value();
    const bool odd = n % 2 != 0;
    const int dim = odd ? n + 1 : n;
    ComplexMatrix m(dim, dim);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (j != k) m(j, k) = (x[static_cast<size_t>(j)] - x[static_cast<size_t>(k)]) / (x[static_cast<size_t>(j)] + x[static_cast<size_t>(k)]);
    if (odd)
        for (int j = 0; j < n; ++j) {
            m(j, n) = 1.0;
            m(n, j) = -1.0;
        }
    chk.rhs = pfaffian(m);
    return chk;
}

// Tensor-product quadrature of Pf[s(x_j, x_k)] det[phi_j(x_k)] (with the
// antisymmetric factor s = (x-y)/(x+y) and its ones-bordered companion for
// odd counts) against count! times the Pfaffian of the pair/single moment
// matrix. Each axis gets its own quadrature order; orders must keep node
// magnitudes distinct across axes so the removable line is never hit.
inline IdentityCheck integration_identity_check(const PhiFamily& fam, const WeightSpec& w,
                                                const std::vector<int>& axis_orders,
                                                int kernel_order) {
    const int n = fam.count;
    if (static_cast<int>(axis_orders.size()) != n)
        throw DimensionError("integration_identity_check: one order per axis");
    std::vector<QuadratureRule> rules;
    rules.reserve(static_cast<size_t>(n));
    for (int ax = 0; ax < n; ++ax) rules.push_back(weighted_rule(w, axis_orders[static_cast<size_t>(ax)]));

    const bool odd = n % 2 != 0;
    const int dim = odd ? n + 1 : n;
    ComplexMatrix smat(dim, dim);
    ComplexMatrix pmat(n, n);
    if (odd)
        for (int j = 0; j < n; ++j) {
            smat(j, n) = 1.0;
            smat(n, j) = -1.0;
        }

    std::vector<int> idx(static_cast<size_t>(n), 0);
    std::vector<double> xs(static_cast<size_t>(n));
    Complex lhs = 0.0;
    while (true) {
        double wt = 1.0;
        for (int ax = 0; ax < n; ++ax) {
            xs[static_cast<size_t>(ax)] = rules[static_cast<size_t>(ax)].nodes[static_cast<size_t>(idx[static_cast<size_t>(ax)])];
            wt *= rules[static_cast<size_t>(ax)].weights[static_cast<size_t>(idx[static_cast<size_t>(ax)])];
        }
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (j != k)
                    smat(j, k) = (xs[static_cast<size_t>(j)] - xs[static_cast<size_t>(k)]) /
                                 (xs[static_cast<size_t>(j)] + xs[static_cast<size_t>(k)]);
                pmat(j, k) = fam.phi(j, xs[static_cast<size_t>(k)]);
            }
        lhs += wt * pfaffian(smat) * det(pmat);
        int ax = n - 1;
        while (ax >= 0 && ++idx[static_cast<size_t>(ax)] == rules[static_cast<size_t>(ax)].order()) {
            idx[static_cast<size_t>(ax)] = 0;
            --ax;
        }
        if (ax < 0) break;
    }

    ComplexMatrix moments = ipdetail::moment_matrix(fam, w, kernel_order);
    IdentityCheck chk;
    chk.lhs = lhs;
    chk.rhs = detail::factorial(n) * pfaffian(moments);
    return chk;
}

}  // namespace haarint
