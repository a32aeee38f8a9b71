#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "haarint/char_sums.hpp"
#include "haarint/characters.hpp"
#include "haarint/hypergeometric.hpp"
#include "haarint/partitions.hpp"
#include "haarint/rng.hpp"

using namespace haarint;

namespace {

double rel(Complex a, Complex b) {
    const double m = std::max(std::abs(a), std::abs(b));
    return m > 0.0 ? std::abs(a - b) / m : 0.0;
}

long binom_long(int n, int k) {
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

TEST_CASE("partition generator enumerates bounded partitions once") {
    // partitions with at most n parts, each at most M: binom(n + M, n) of them
    for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 4}, {2, 3}, {3, 5}}) {
        std::set<std::vector<int>> seen;
        long count = 0;
        for (PartitionGenerator gen(n, m); !gen.done(); gen.advance()) {
            const std::vector<int>& p = gen.current();
            REQUIRE(is_partition(p));
            REQUIRE(static_cast<int>(p.size()) == n);
            REQUIRE(p[0] <= m);
            REQUIRE(seen.insert(p).second);
            ++count;
        }
        REQUIRE(count == binom_long(n + m, n));
    }
}

TEST_CASE("schur polynomials at small partitions") {
    const Complex x(0.7, 0.2), y(-0.4, 0.5);
    const Spectrum s = make_spectrum(std::vector<Complex>{x, y});
    REQUIRE(rel(schur_char({0, 0}, s), 1.0) < 1e-14);
    REQUIRE(rel(schur_char({1, 0}, s), x + y) < 1e-13);
    REQUIRE(rel(schur_char({1, 1}, s), x * y) < 1e-13);
    REQUIRE(rel(schur_char({2, 0}, s), x * x + x * y + y * y) < 1e-13);
    REQUIRE(rel(schur_char({2, 1}, s), x * y * (x + y)) < 1e-13);

    // symmetric under swapping the variables
    const Spectrum sw = make_spectrum(std::vector<Complex>{y, x});
    REQUIRE(rel(schur_char({3, 1}, s), schur_char({3, 1}, sw)) < 1e-12);
}

TEST_CASE("schur at the identity equals the dimension") {
    // fully confluent evaluation point
    for (int n : {2, 3, 4}) {
        const Spectrum ones = make_spectrum(std::vector<Complex>(n, Complex(1.0)));
        REQUIRE(ones.degenerate());
        std::vector<std::vector<int>> parts = {{std::vector<int>(n, 0)}};
        std::vector<int> ladder(n, 0);
        for (int j = 0; j < n; ++j) ladder[j] = std::max(3 - j, 0);
        parts.push_back(ladder);
        parts.push_back(std::vector<int>(n, 2));
        for (const auto& p : parts) {
            const Complex chi = schur_char(p, ones);
            const Complex d = dim_rep(p, n, DimVariant::weyl);
            REQUIRE(rel(chi, d) < 1e-10);
        }
    }
}

TEST_CASE("dimension formula variants agree") {
    RngStream rng(31, 0);
    for (int n : {1, 2, 3, 5}) {
        for (int t = 0; t < 20; ++t) {
            std::vector<int> p(n);
            int top = static_cast<int>(rng.uniform() * 8);
            for (int j = 0; j < n; ++j) {
                p[j] = top;
                if (top > 0) top -= static_cast<int>(rng.uniform() * (top + 1));
            }
            const Complex w = dim_rep(p, n, DimVariant::weyl);
            const Complex g = dim_rep(p, n, DimVariant::gamma_table);
            const Complex b1 = dim_rep(p, n, DimVariant::binomial_table, Complex(2.5));
            const Complex b2 = dim_rep(p, n, DimVariant::binomial_table, Complex(-1.3, 0.7));
            REQUIRE(rel(w, g) < 1e-11);
            REQUIRE(rel(w, b1) < 1e-11);
            REQUIRE(rel(w, b2) < 1e-11);
        }
    }
}

TEST_CASE("dimension values at hand-checked partitions") {
    REQUIRE(rel(dim_rep({0, 0}, 2), 1.0) < 1e-14);
    REQUIRE(rel(dim_rep({1, 0}, 2), 2.0) < 1e-13);   // defining rep of U(2)
    REQUIRE(rel(dim_rep({1, 1}, 2), 1.0) < 1e-13);   // determinant rep
    REQUIRE(rel(dim_rep({2, 0}, 2), 3.0) < 1e-13);   // symmetric square
    REQUIRE(rel(dim_rep({1, 0, 0}, 3), 3.0) < 1e-13);
    REQUIRE(rel(dim_rep({1, 1, 0}, 3), 3.0) < 1e-13);
    REQUIRE(rel(dim_rep({2, 1, 0}, 3), 8.0) < 1e-12);  // adjoint of SU(3)
}

TEST_CASE("one-source series reduces to kummer at size one") {
    for (Complex alpha : {Complex(1.0), Complex(1.7, 0.4), Complex(0.0)}) {
        for (Complex z : {Complex(0.5), Complex(0.2, 0.6), Complex(0.95)}) {
            const Spectrum s = make_spectrum(std::vector<Complex>{z});
            const EvalResult r = charsum::ingham_siegel_1(s, alpha);
            REQUIRE(rel(r.value, kummer_1f1(-alpha, Complex(1.0), -z)) < 1e-12);
        }
    }
}

TEST_CASE("one-source FH series reduces to gauss at size one") {
    for (Complex alpha : {Complex(1.2, 0.3), Complex(2.0)}) {
        for (Complex beta : {Complex(0.6), Complex(0.4, -0.2)}) {
            const Complex z(0.45, 0.15);
            const Spectrum s = make_spectrum(std::vector<Complex>{z});
            const EvalResult r = charsum::fisher_hartwig_1(s, alpha, beta);
            REQUIRE(rel(r.value, gauss_2f1(-alpha, -beta, Complex(1.0), z)) < 1e-12);
        }
    }
}

TEST_CASE("two-source series collapse at unit second spectrum") {
    // chi_r(1,...,1) = d_r cancels one dimension factor exactly
    const std::vector<Complex> mu = {{0.35, 0.1}, {0.6, -0.2}};
    const Spectrum mu2 = make_spectrum(mu);
    const Spectrum ones = make_spectrum(std::vector<Complex>{{1.0, 0.0}, {1.0, 0.0}});
    const Complex alpha(1.4, 0.2), beta(0.7, -0.1);

    const EvalResult is2 = charsum::ingham_siegel_2(mu2, ones, alpha);
    const EvalResult is1 = charsum::ingham_siegel_1(mu2, alpha);
    REQUIRE(rel(is2.value, is1.value) < 1e-11);

    const EvalResult fh2 = charsum::fisher_hartwig_2(mu2, ones, alpha, beta);
    const EvalResult fh1 = charsum::fisher_hartwig_1(mu2, alpha, beta);
    REQUIRE(rel(fh2.value, fh1.value) < 1e-11);
}

TEST_CASE("series convergence metadata is reported") {
    const Spectrum s = make_spectrum(std::vector<Complex>{{0.3, 0.0}, {0.7, 0.0}});
    const EvalResult r = charsum::ingham_siegel_1(s, Complex(1.5));
    REQUIRE(r.diag.truncation_cutoff >= 8);
    REQUIRE(r.diag.terms_used > 0);
    REQUIRE(r.diag.tail_estimate >= 0.0);
    REQUIRE(r.diag.tail_estimate < 1e-12);
}

TEST_CASE("series domain rejections") {
    const Spectrum big = make_spectrum(std::vector<Complex>{{1.5, 0.0}});
    REQUIRE_THROWS_AS(charsum::ingham_siegel_1(big, Complex(1.0)), DomainError);
    const Spectrum unit = make_spectrum(std::vector<Complex>{{1.0, 0.0}});
    REQUIRE_THROWS_AS(charsum::fisher_hartwig_1(unit, Complex(1.0), Complex(1.0)),
                      DomainError);
    const Spectrum in1 = make_spectrum(std::vector<Complex>{{0.9, 0.0}});
    const Spectrum in2 = make_spectrum(std::vector<Complex>{{1.2, 0.0}});
    REQUIRE_THROWS_AS(charsum::fisher_hartwig_2(in1, in2, Complex(1.0), Complex(1.0)),
                      DomainError);
    const Spectrum a = make_spectrum(std::vector<Complex>{{0.5, 0.0}});
    const Spectrum b = make_spectrum(std::vector<Complex>{{0.5, 0.0}, {0.6, 0.0}});
    REQUIRE_THROWS_AS(charsum::ingham_siegel_2(a, b, Complex(1.0)), DimensionError);
}

TEST_CASE("character argument validation") {
    const Spectrum s = make_spectrum(std::vector<Complex>{{0.5, 0.0}, {0.25, 0.0}});
    REQUIRE_THROWS_AS(schur_char({1, 0, 0}, s), DimensionError);
    REQUIRE_THROWS_AS(schur_char({1, 2}, s), DomainError);
    REQUIRE_THROWS_AS(dim_rep({2, -1}, 2), DomainError);
}

TEST_CASE("finite Cauchy-Binet identity on decaying tables") {
    RngStream rng(32, 0);
    for (int n : {1, 2, 3}) {
        std::vector<Complex> ca(n), cb(n);
        for (int j = 0; j < n; ++j) {
            ca[j] = Complex(0.4 + 0.3 * rng.uniform(), 0.2 * rng.uniform());
            cb[j] = Complex(0.5 + 0.2 * rng.uniform(), -0.15 * rng.uniform());
        }
        auto a = [&](int j, long m) { return std::pow(ca[j], static_cast<double>(m)); };
        auto b = [&](int j, long m) { return std::pow(cb[j], static_cast<double>(m)); };
        const CauchyBinetCheck c = cauchy_binet_check(a, b, n, 40);
        REQUIRE(rel(c.lhs, c.rhs) < 1e-11);
    }
    REQUIRE_THROWS_AS(
        cauchy_binet_check([](int, long) { return Complex(0.5); },
                           [](int, long) { return Complex(0.5); }, 3, 1),
        DimensionError);
}
