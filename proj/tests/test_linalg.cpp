#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "haarint/det_ratio.hpp"
#include "haarint/determinant.hpp"
#include "haarint/eigen.hpp"
#include "haarint/pfaffian.hpp"
#include "haarint/rng.hpp"
#include "haarint/sampling.hpp"

using namespace haarint;

namespace {

ComplexMatrix random_matrix(RngStream& rng, int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
    return m;
}

ComplexMatrix random_skew(RngStream& rng, int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            m(i, j) = rng.complex_normal();
            m(j, i) = -m(i, j);
        }
    return m;
}

// Laplace expansion along the first row; exponential but fine at n <= 6.
Complex det_cofactor(const ComplexMatrix& a) {
    const int n = a.rows();
    if (n == 1) return a(0, 0);
    Complex s = 0.0;
    for (int c = 0; c < n; ++c) {
        ComplexMatrix minor(n - 1, n - 1);
        for (int i = 1; i < n; ++i) {
            int cc = 0;
            for (int j = 0; j < n; ++j) {
                if (j == c) continue;
                minor(i - 1, cc++) = a(i, j);
            }
        }
        const double sign = (c % 2 == 0) ? 1.0 : -1.0;
        s += sign * a(0, c) * det_cofactor(minor);
    }
    return s;
}

// Sum over perfect matchings, expanding the lowest unmatched index first.
Complex pfaffian_matchings(const ComplexMatrix& a) {
    std::function<Complex(const std::vector<int>&)> rec =
        [&](const std::vector<int>& v) -> Complex {
        if (v.empty()) return Complex(1.0);
        Complex s = 0.0;
        for (size_t k = 1; k < v.size(); ++k) {
            std::vector<int> rest;
            for (size_t t = 1; t < v.size(); ++t)
                if (t != k) rest.push_back(v[t]);
            const double sign = (k % 2 == 1) ? 1.0 : -1.0;
            s += sign * a(v[0], v[k]) * rec(rest);
        }
        return s;
    };
    std::vector<int> all(static_cast<size_t>(a.rows()));
    std::iota(all.begin(), all.end(), 0);
    return rec(all);
}

double rel(Complex a, Complex b) {
    const double m = std::max(std::abs(a), std::abs(b));
    return m > 0.0 ? std::abs(a - b) / m : 0.0;
}

void sort_by_parts(std::vector<Complex>& v) {
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

}  // namespace

TEST_CASE("determinant matches cofactor expansion") {
    RngStream rng(11, 0);
    for (int n = 1; n <= 6; ++n) {
        const ComplexMatrix a = random_matrix(rng, n);
        REQUIRE(rel(det(a), det_cofactor(a)) < 1e-12);
    }
}

TEST_CASE("determinant is multiplicative and log form is consistent") {
    RngStream rng(12, 0);
    for (int n : {2, 3, 5}) {
        const ComplexMatrix a = random_matrix(rng, n);
        const ComplexMatrix b = random_matrix(rng, n);
        REQUIRE(rel(det(a * b), det(a) * det(b)) < 1e-12);
        REQUIRE(rel(det_log(a).value(), det(a)) < 1e-12);
    }
}

TEST_CASE("lu_solve produces small residuals") {
    RngStream rng(13, 0);
    const int n = 6;
    const ComplexMatrix a = random_matrix(rng, n);
    std::vector<Complex> b(n);
    for (int i = 0; i < n; ++i) b[i] = rng.complex_normal();
    const std::vector<Complex> rhs = b;
    const LuFactors f = lu_factor(a);
    lu_solve(f, b);  // in place
    for (int i = 0; i < n; ++i) {
        Complex r = -rhs[i];
        for (int j = 0; j < n; ++j) r += a(i, j) * b[j];
        REQUIRE(std::abs(r) < 1e-11);
    }
}

TEST_CASE("pfaffian matches the matching-sum oracle") {
    RngStream rng(14, 0);
    for (int n : {2, 4, 6}) {
        const ComplexMatrix a = random_skew(rng, n);
        REQUIRE(rel(pfaffian(a), pfaffian_matchings(a)) < 1e-11);
    }
}

TEST_CASE("pfaffian base case and square identity") {
    ComplexMatrix m(2, 2);
    m(0, 1) = Complex(2.5, -1.0);
    m(1, 0) = -m(0, 1);
    REQUIRE(std::abs(pfaffian(m) - Complex(2.5, -1.0)) < 1e-14);

    RngStream rng(15, 0);
    for (int n : {2, 4, 6, 8}) {
        const ComplexMatrix a = random_skew(rng, n);
        REQUIRE(rel(pfaffian(a) * pfaffian(a), det(a)) < 1e-10);
    }
}

TEST_CASE("pfaffian rejects bad shapes") {
    RngStream rng(16, 0);
    REQUIRE_THROWS_AS(pfaffian(random_skew(rng, 3)), DimensionError);
    ComplexMatrix notskew(2, 2);
    notskew(0, 1) = 1.0;
    notskew(1, 0) = 1.0;
    REQUIRE_THROWS_AS(pfaffian(notskew), DomainError);
}

TEST_CASE("pfaffian of an odd-rank-style zero row pattern vanishes") {
    ComplexMatrix a(4, 4);
    a(0, 1) = 1.0;
    a(1, 0) = -1.0;
    // rows/cols 2,3 are zero: matrix is singular, Pf = 0
    REQUIRE(std::abs(pfaffian(a)) < 1e-14);
}

TEST_CASE("eigenvalues of triangular matrices are the diagonal") {
    RngStream rng(17, 0);
    for (int n : {2, 3, 5, 8}) {
        ComplexMatrix t(n, n);
        std::vector<Complex> diag;
        for (int i = 0; i < n; ++i) {
            t(i, i) = rng.complex_normal();
            diag.push_back(t(i, i));
            for (int j = i + 1; j < n; ++j) t(i, j) = rng.complex_normal();
        }
        std::vector<Complex> ev = eigenvalues(t);
        sort_by_parts(ev);
        sort_by_parts(diag);
        for (int i = 0; i < n; ++i) REQUIRE(std::abs(ev[i] - diag[i]) < 1e-9);
    }
}

TEST_CASE("eigenvalues survive unitary conjugation") {
    RngStream rng(18, 0);
    const int n = 4;
    std::vector<Complex> diag = {{1.0, 0.5}, {-0.3, 0.2}, {0.1, -0.9}, {2.0, 0.0}};
    ComplexMatrix d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = diag[i];
    HaarSampler hs(n);
    ComplexMatrix q(n, n);
    hs.sample(rng, q);
    std::vector<Complex> ev = eigenvalues(q * d * q.adjoint());
    sort_by_parts(ev);
    sort_by_parts(diag);
    for (int i = 0; i < n; ++i) REQUIRE(std::abs(ev[i] - diag[i]) < 1e-9);
}

TEST_CASE("eigenvalue sums and products match trace and determinant") {
    RngStream rng(19, 0);
    for (int n : {3, 5, 7}) {
        const ComplexMatrix a = random_matrix(rng, n);
        const std::vector<Complex> ev = eigenvalues(a);
        Complex s = 0.0, p = 1.0;
        for (Complex z : ev) {
            s += z;
            p *= z;
        }
        REQUIRE(std::abs(s - a.trace()) < 1e-9 * (1.0 + std::abs(s)));
        REQUIRE(rel(p, det(a)) < 1e-8);
    }
}

TEST_CASE("products AD and DA share a spectrum") {
    RngStream rng(20, 0);
    for (int n : {2, 3, 4}) {
        const ComplexMatrix a = random_matrix(rng, n);
        const ComplexMatrix d = random_matrix(rng, n);
        std::vector<Complex> e1 = eigenvalues(a * d);
        std::vector<Complex> e2 = eigenvalues(d * a);
        sort_by_parts(e1);
        sort_by_parts(e2);
        for (int i = 0; i < n; ++i) REQUIRE(std::abs(e1[i] - e2[i]) < 1e-9);
    }
}

TEST_CASE("vandermonde convention: descending powers") {
    // det[t_j^{N-k}], N = 3: prod_{j<k} (t_j - t_k)
    const std::vector<Complex> t = {{1.5, 0.2}, {-0.4, 1.0}, {0.3, -0.7}};
    const Complex direct = (t[0] - t[1]) * (t[0] - t[2]) * (t[1] - t[2]);
    REQUIRE(rel(vandermonde(t), direct) < 1e-14);

    ComplexMatrix v(3, 3);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            Complex pw = 1.0;
            for (int q = 0; q < 2 - k; ++q) pw *= t[j];
            v(j, k) = pw;
        }
    REQUIRE(rel(det(v), direct) < 1e-13);
}

TEST_CASE("det_ratio on monomials gives complete homogeneous forms") {
    // f_1 = t^2, f_2 = 1 over {x, y}: det[[x^2, y^2], [1, 1]] / (x - y) = x + y
    std::vector<DerivFn> funcs(2);
    funcs[0] = [](int p, Complex z) { return detail::monomial_taylor(2, p, z) * detail::factorial(p); };
    funcs[1] = [](int p, Complex z) { return detail::monomial_taylor(0, p, z) * detail::factorial(p); };

    const Complex x(0.7, 0.1), y(-0.2, 0.4);
    const DetRatioResult distinct = det_ratio(funcs, make_spectrum(std::vector<Complex>{x, y}));
    REQUIRE_FALSE(distinct.clustered);
    REQUIRE(rel(distinct.value, x + y) < 1e-12);

    const DetRatioResult conf = det_ratio(funcs, make_spectrum(std::vector<Complex>{x, x}));
    REQUIRE(conf.clustered);
    REQUIRE(rel(conf.value, 2.0 * x) < 1e-12);
}

TEST_CASE("det_ratio is continuous across the clustering threshold") {
    std::vector<DerivFn> funcs(3);
    for (int j = 0; j < 3; ++j) {
        const int m = 4 - j;  // powers 4, 3, 2
        funcs[j] = [m](int p, Complex z) {
            return detail::monomial_taylor(m, p, z) * detail::factorial(p);
        };
    }
    const Complex base(0.9, -0.3);
    const Complex far(-0.5, 0.2);
    // value with a pair split slightly wider than the clustering width vs the
    // exact confluent value: difference must scale with the split
    const double eps = 1e-6;
    const DetRatioResult split = det_ratio(
        funcs, make_spectrum(std::vector<Complex>{base + eps, base - eps, far}));
    const DetRatioResult fused =
        det_ratio(funcs, make_spectrum(std::vector<Complex>{base, base, far}));
    REQUIRE(split.clustered);  // separation 2e-6 sits under the relative threshold
    REQUIRE(rel(split.value, fused.value) < 1e-9);

    const double wide = 2e-4;
    const DetRatioResult apart = det_ratio(
        funcs, make_spectrum(std::vector<Complex>{base + wide, base - wide, far}));
    REQUIRE_FALSE(apart.clustered);
    REQUIRE(rel(apart.value, fused.value) < 1e-6);
}

TEST_CASE("det_ratio2 handles bivariate confluence") {
    // Kernel (1 + xy)^3: mixed derivatives are polynomial
    auto kernel = [](int p, int q, Complex x, Complex y) {
        // d^p_x d^q_y (1+xy)^3 = sum_i p! q! / (i! (p-i)! (q-i)!) x^{q-i} y^{p-i} h^(p+q-i)
        // easier: expand (1+xy)^3 = 1 + 3xy + 3x^2y^2 + x^3y^3 and differentiate monomials
        const double coef[4] = {1.0, 3.0, 3.0, 1.0};
        Complex s = 0.0;
        for (int m = 0; m <= 3; ++m) {
            const Complex dx = detail::monomial_taylor(m, p, x) * detail::factorial(p);
            const Complex dy = detail::monomial_taylor(m, q, y) * detail::factorial(q);
            s += coef[m] * dx * dy;
        }
        return s;
    };
    const std::vector<Complex> xs = {{0.5, 0.0}, {0.2, 0.3}};
    const std::vector<Complex> ys = {{-0.4, 0.1}, {0.9, 0.0}};
    const DetRatioResult plain = det_ratio2(kernel, make_spectrum(xs), make_spectrum(ys));

    ComplexMatrix k(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Complex t = 1.0 + xs[i] * ys[j];
            k(i, j) = t * t * t;
        }
    const Complex expect = det(k) / (vandermonde(xs) * vandermonde(ys));
    REQUIRE(rel(plain.value, expect) < 1e-11);

    // y fully degenerate: compare against a small-split limit
    const std::vector<Complex> yc = {{0.3, -0.2}, {0.3, -0.2}};
    const DetRatioResult conf = det_ratio2(kernel, make_spectrum(xs), make_spectrum(yc));
    REQUIRE(conf.clustered);
    const double h = 1e-6;
    const std::vector<Complex> ysplit = {Complex(0.3, -0.2) + h, Complex(0.3, -0.2) - h};
    ComplexMatrix k2(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Complex t = 1.0 + xs[i] * ysplit[j];
            k2(i, j) = t * t * t;
        }
    const Complex limit = det(k2) / (vandermonde(xs) * vandermonde(ysplit));
    REQUIRE(rel(conf.value, limit) < 1e-7);
}

TEST_CASE("spectrum clustering groups near-coincident values") {
    const Spectrum far = make_spectrum(std::vector<Complex>{{1.0, 0.0}, {2.0, 0.0}});
    REQUIRE_FALSE(far.degenerate());
    const Spectrum near = make_spectrum(std::vector<Complex>{{1.0, 0.0}, {1.0 + 1e-7, 0.0}});
    REQUIRE(near.degenerate());
    REQUIRE(near.clusters.size() == 1);
    const Spectrum chain =
        make_spectrum(std::vector<Complex>{{1.0, 0.0}, {1.00005, 0.0}, {1.0001, 0.0}});
    REQUIRE(chain.degenerate());
}
