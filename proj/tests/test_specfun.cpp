#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "haarint/hypergeometric.hpp"
#include "haarint/special_functions.hpp"

using namespace haarint;

namespace {

double rel(Complex a, Complex b) {
    const double m = std::max(std::abs(a), std::abs(b));
    return m > 0.0 ? std::abs(a - b) / m : 0.0;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("log_gamma basics") {
    REQUIRE(std::abs(gamma_fn(Complex(0.5)) - std::sqrt(kPi)) < 1e-14);
    REQUIRE(std::abs(gamma_fn(Complex(1.0)) - 1.0) < 1e-14);
    REQUIRE(std::abs(gamma_fn(Complex(6.0)) - 120.0) < 1e-12);

    // recurrence on generic complex arguments
    for (Complex z : {Complex(0.3, 0.7), Complex(-1.4, 0.2), Complex(2.5, -3.0)}) {
        REQUIRE(rel(gamma_fn(z + 1.0), z * gamma_fn(z)) < 1e-13);
    }
    // reflection
    for (Complex z : {Complex(0.3, 0.4), Complex(-0.7, 1.1)}) {
        const Complex lhs = gamma_fn(z) * gamma_fn(1.0 - z);
        const Complex rhs = kPi / std::sin(kPi * z);
        REQUIRE(rel(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("pochhammer matches gamma ratios") {
    const Complex a(0.7, -0.4);
    REQUIRE(std::abs(pochhammer(a, 0) - 1.0) < 1e-15);
    REQUIRE(rel(pochhammer(a, 5), gamma_fn(a + 5.0) / gamma_fn(a)) < 1e-13);
    REQUIRE(std::abs(pochhammer(Complex(-3.0), 4)) < 1e-15);  // terminates
}

TEST_CASE("generalized binomial coefficients") {
    REQUIRE(std::abs(gen_binomial(Complex(5.0), 2) - 10.0) < 1e-13);
    REQUIRE(std::abs(gen_binomial(Complex(5.0), 0) - 1.0) < 1e-15);
    REQUIRE(std::abs(gen_binomial(Complex(5.0), 7)) < 1e-13);  // above integer top

    const Complex a(1.3, 0.8);
    // binom(a, k) = (-1)^k binom(k - a - 1, k)
    for (int k : {1, 2, 5}) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        REQUIRE(rel(gen_binomial(a, k),
                    sgn * gen_binomial(Complex(k) - a - 1.0, k)) < 1e-13);
    }
    // ratio form against Gamma for non-integer top
    REQUIRE(rel(gen_binomial(a, 3),
                gamma_fn(a + 1.0) / (gamma_fn(Complex(4.0)) * gamma_fn(a - 2.0))) < 1e-13);
}

TEST_CASE("binom_gamma agrees with gen_binomial at integer bottom") {
    const Complex x(2.4, 0.9);
    for (int k : {0, 1, 3}) {
        REQUIRE(rel(binom_gamma(x, Complex(static_cast<double>(k))), gen_binomial(x, k)) <
                1e-13);
    }
}

TEST_CASE("barnes G at small integers") {
    REQUIRE(barnes_g_log(1) == 0.0);
    REQUIRE(barnes_g_log(2) == 0.0);
    REQUIRE(barnes_g_log(3) == 0.0);
    REQUIRE(std::abs(barnes_g_log(4) - std::log(2.0)) < 1e-14);
    REQUIRE(std::abs(barnes_g_log(5) - std::log(12.0)) < 1e-14);
    REQUIRE_THROWS_AS(barnes_g_log(0), DomainError);
}

TEST_CASE("binomial convolution identity") {
    // sum_k binom(alpha, m+k) binom(beta, k) = binom(alpha+beta, beta+m).
    // Tail decays like k^{-(1+Re(alpha+beta))}: at Re = 3.3 a cutoff of 3000
    // leaves a tail near 1e-12, so 1e-10 is an honest bar.
    for (int m : {-2, 0, 3}) {
        const ConvolutionCheck c =
            binom_convolution_check(Complex(1.5, 0.4), Complex(1.8, -0.2), m, 3000);
        REQUIRE(rel(c.lhs, c.rhs) < 1e-10);
    }
    // non-negative integer alpha+beta terminates: exact equality regime
    const ConvolutionCheck t = binom_convolution_check(Complex(2.0), Complex(3.0), 1, 100);
    REQUIRE(rel(t.lhs, t.rhs) < 1e-14);

    REQUIRE_THROWS_AS(binom_convolution_check(Complex(-0.8), Complex(-0.9), 0, 100),
                      DomainError);
    REQUIRE_THROWS_AS(binom_convolution_check(Complex(1.0), Complex(1.0), 30, 20),
                      DomainError);
}

TEST_CASE("kummer series reproduces elementary functions") {
    const Complex z(0.7, -1.2);
    REQUIRE(rel(kummer_1f1(Complex(1.3, 0.2), Complex(1.3, 0.2), z), std::exp(z)) < 1e-13);
    // terminating polynomial: 1F1(-2; 1; z) = 1 - 2z + z^2/2
    const Complex p = 1.0 - 2.0 * z + 0.5 * z * z;
    REQUIRE(rel(kummer_1f1(Complex(-2.0), Complex(1.0), z), p) < 1e-14);
    // Kummer transformation 1F1(a;b;z) = e^z 1F1(b-a;b;-z)
    const Complex a(0.4, 0.3), b(2.2, -0.5);
    REQUIRE(rel(kummer_1f1(a, b, z), std::exp(z) * kummer_1f1(b - a, b, -z)) < 1e-12);
}

TEST_CASE("kummer pole behavior") {
    // b at a non-positive integer is a pole unless a terminates first
    REQUIRE_THROWS_AS(kummer_1f1(Complex(0.5), Complex(-1.0), Complex(0.3)), PoleError);
    // a = -1 ends the series at the linear term, before the b = -2 denominator
    // zero is ever reached: 1F1(-1; -2; z) = 1 + z/2
    const Complex v = kummer_1f1(Complex(-1.0), Complex(-2.0), Complex(0.6));
    REQUIRE(rel(v, Complex(1.3)) < 1e-14);
}

TEST_CASE("gauss series reproduces elementary functions") {
    const Complex z(0.35, 0.2);
    // 2F1(1,1;2;z) = -log(1-z)/z
    REQUIRE(rel(gauss_2f1(Complex(1.0), Complex(1.0), Complex(2.0), z),
                -std::log(1.0 - z) / z) < 1e-13);
    // 2F1(a,b;b;z) = (1-z)^{-a}
    const Complex a(0.8, -0.3);
    REQUIRE(rel(gauss_2f1(a, Complex(1.7), Complex(1.7), z),
                std::exp(-a * std::log(1.0 - z))) < 1e-13);
    // terminating case is a polynomial valid anywhere
    const Complex big(3.0, 1.0);
    const Complex poly = gauss_2f1(Complex(-2.0), Complex(1.5), Complex(2.5), big);
    const Complex direct = 1.0 + (-2.0) * 1.5 / 2.5 * big +
                           ((-2.0) * (-1.0) / 2.0) * (1.5 * 2.5 / (2.5 * 3.5)) * big * big;
    REQUIRE(rel(poly, direct) < 1e-13);
}

TEST_CASE("gauss summation at unit argument") {
    // 2F1(a,b;c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)), Re(c-a-b) > 0.
    // Terms decay like k^{-(1+Re(c-a-b))}; c-a-b = 3.7 with 60000 terms leaves
    // a tail well under 1e-11.
    const Complex a(0.4, 0.3), b(-0.2, -0.5), c = a + b + Complex(3.7, 0.2);
    SeriesControl ctl;
    ctl.max_terms = 60000;
    const Complex lhs = gauss_2f1(a, b, c, Complex(1.0), ctl);
    const Complex rhs = std::exp(log_gamma(c) + log_gamma(c - a - b) - log_gamma(c - a) -
                                 log_gamma(c - b));
    REQUIRE(rel(lhs, rhs) < 1e-10);
}

TEST_CASE("gauss domain and pole errors") {
    REQUIRE_THROWS_AS(gauss_2f1(Complex(0.5), Complex(0.5), Complex(1.5), Complex(1.2)),
                      DomainError);
    REQUIRE_THROWS_AS(gauss_2f1(Complex(0.5), Complex(0.5), Complex(-2.0), Complex(0.3)),
                      PoleError);
    // unit modulus without enough decay: divergent
    REQUIRE_THROWS(gauss_2f1(Complex(1.0), Complex(1.0), Complex(1.5), Complex(-1.0, 0.0)));
}

TEST_CASE("hypergeometric derivatives carry the Pochhammer prefactor") {
    const Complex a(0.9, 0.4), b(1.8, -0.2), c(2.3, 0.1), z(0.31, -0.22);
    // raw n-th derivative vs the shifted-parameter formula
    for (int n : {1, 2, 3}) {
        const Complex d1 = kummer_1f1_derivative(n, a, b, z);
        const Complex f1 =
            pochhammer(a, n) / pochhammer(b, n) * kummer_1f1(a + Complex(n), b + Complex(n), z);
        REQUIRE(rel(d1, f1) < 1e-12);

        const Complex d2 = gauss_2f1_derivative(n, a, b, c, z);
        const Complex f2 = pochhammer(a, n) * pochhammer(b, n) / pochhammer(c, n) *
                           gauss_2f1(a + Complex(n), b + Complex(n), c + Complex(n), z);
        REQUIRE(rel(d2, f2) < 1e-12);
    }
    // finite-difference cross-check of the first derivative
    const double h = 1e-6;
    const Complex fd =
        (kummer_1f1(a, b, z + h) - kummer_1f1(a, b, z - h)) / Complex(2.0 * h);
    REQUIRE(rel(fd, kummer_1f1_derivative(1, a, b, z)) < 1e-8);
    const Complex fd2 =
        (gauss_2f1(a, b, c, z + h) - gauss_2f1(a, b, c, z - h)) / Complex(2.0 * h);
    REQUIRE(rel(fd2, gauss_2f1_derivative(1, a, b, c, z)) < 1e-8);
}

TEST_CASE("integer classification helpers") {
    REQUIRE(detail::is_real_integer(Complex(3.0, 0.0)));
    REQUIRE_FALSE(detail::is_real_integer(Complex(3.0, 1e-6)));
    REQUIRE(detail::is_nonpositive_integer(Complex(0.0)));
    REQUIRE(detail::is_nonpositive_integer(Complex(-4.0)));
    REQUIRE_FALSE(detail::is_nonpositive_integer(Complex(2.0)));
    REQUIRE(detail::is_nonnegative_integer(Complex(2.0)));
    REQUIRE_FALSE(detail::is_nonnegative_integer(Complex(-1.0)));
}
