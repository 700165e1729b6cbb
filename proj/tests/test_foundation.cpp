// Numerical foundation: formal power series, graded series, the dense
// linear solver, the gamma implementations, and formatting.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "pvi/formal.hpp"
#include "pvi/format.hpp"
#include "pvi/gamma.hpp"
#include "pvi/gradedseries.hpp"
#include "pvi/linsolve.hpp"
#include "pvi/scalar.hpp"

using pvi::Complex64;
using pvi::ComplexMP;
using pvi::PowerSeries;

namespace {

std::mt19937_64 rng(20260825u);

Complex64 randomComplex(double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

PowerSeries<Complex64> randomSeries(int order, double scale, const Complex64& c0) {
    PowerSeries<Complex64> f(order);
    f[0] = c0;
    for (int k = 1; k <= order; ++k) f[k] = randomComplex(scale);
    return f;
}

double maxCoeffDiff(const PowerSeries<Complex64>& a, const PowerSeries<Complex64>& b) {
    double m = 0.0;
    for (int k = 0; k <= std::min(a.order(), b.order()); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace

TEST_CASE("power series: reciprocal, exp/log, sqrt, pow, compose") {
    const int N = 18;
    auto f = randomSeries(N, 0.4, Complex64(1.3, -0.2));

    auto r = pvi::reciprocal(f);
    auto one = f * r;
    CHECK(std::abs(one[0] - 1.0) < 1e-13);
    for (int k = 1; k <= N; ++k) CHECK(std::abs(one[k]) < 1e-12);

    auto g = f;
    g[0] = 0.0; // exp needs g(0) = 0
    auto e = pvi::expSeries(g);
    auto back = pvi::logSeries(e);
    CHECK(maxCoeffDiff(back, g) < 1e-12);

    auto h = f;
    h[0] = 1.0; // sqrt branch anchored at 1
    auto s = pvi::sqrtSeries(h);
    CHECK(maxCoeffDiff(s * s, h) < 1e-12);

    auto p = pvi::powSeries(h, Complex64(2.0));
    CHECK(maxCoeffDiff(p, h * h) < 1e-11);

    // compose(f, g) with g(0)=0 agrees with pointwise evaluation.
    auto comp = pvi::compose(f, g);
    const Complex64 t(0.03, 0.02);
    CHECK(std::abs(comp.evaluate(t) - f.evaluate(g.evaluate(t))) < 1e-10);

    // derivative of exp(g) is g' exp(g) (top coefficient is lost to truncation)
    auto lhs = pvi::derivative(e);
    auto rhs = pvi::derivative(g) * e;
    double worst = 0.0;
    for (int k = 0; k < N; ++k) worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
    CHECK(worst < 1e-11);
}

TEST_CASE("power series: reciprocal of zero constant term throws") {
    PowerSeries<Complex64> f(4);
    f[1] = 1.0;
    CHECK_THROWS_AS(pvi::reciprocal(f), pvi::ReciprocalOfZeroSeries);
    CHECK_THROWS_AS(pvi::sqrtSeries(f), pvi::ReciprocalOfZeroSeries);
}

TEST_CASE("solveDense: square, rectangular, and resonant systems") {
    // Square: random well-conditioned system against a known solution.
    const int n = 12;
    std::vector<std::vector<Complex64>> a(n, std::vector<Complex64>(n));
    std::vector<Complex64> xTrue(n);
    for (int i = 0; i < n; ++i) {
        xTrue[i] = randomComplex();
        for (int j = 0; j < n; ++j) a[i][j] = randomComplex() + (i == j ? Complex64(4.0) : 0.0);
    }
    std::vector<Complex64> b(n, Complex64(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i] += a[i][j] * xTrue[j];
    auto res = pvi::solveDense(a, b);
    for (int i = 0; i < n; ++i) CHECK(std::abs(res.x[i] - xTrue[i]) < 1e-11);

    // Rectangular consistent: duplicate equations.
    auto a2 = a;
    auto b2 = b;
    a2.push_back(a[0]);
    b2.push_back(b[0]);
    auto res2 = pvi::solveDense(a2, b2);
    for (int i = 0; i < n; ++i) CHECK(std::abs(res2.x[i] - xTrue[i]) < 1e-11);
    CHECK(res2.residual < 1e-10);

    // Singular: repeated column makes an unknown undetermined.
    std::vector<std::vector<Complex64>> a3(2, std::vector<Complex64>(2));
    a3[0] = {Complex64(1), Complex64(1)};
    a3[1] = {Complex64(2), Complex64(2)};
    std::vector<Complex64> b3 = {Complex64(1), Complex64(2)};
    CHECK_THROWS_AS(pvi::solveDense(a3, b3), pvi::ResonanceError);
}

TEST_CASE("gamma: values, recurrence, reflection, both backends agree") {
    using std::abs;
    const double sqrtPi = std::sqrt(std::acos(-1.0));
    CHECK(std::abs(pvi::gammaLanczos(Complex64(0.5)) - sqrtPi) < 1e-14);
    CHECK(std::abs(pvi::gammaLanczos(Complex64(5.0)) - 24.0) < 1e-12);
    CHECK(std::abs(pvi::gammaStirling(Complex64(0.5)) - sqrtPi) < 1e-12);

    for (int trial = 0; trial < 50; ++trial) {
        Complex64 z = randomComplex(3.0);
        if (std::abs(z) < 0.2) continue;
        if (std::abs(z - std::round(z.real())) < 0.15 && std::abs(z.imag()) < 0.15) continue;

        // Gamma(z+1) = z Gamma(z)
        const Complex64 g = pvi::gammaLanczos(z);
        const Complex64 g1 = pvi::gammaLanczos(z + 1.0);
        CHECK(std::abs(g1 - z * g) / std::abs(g1) < 1e-12);

        // the two implementations agree
        const Complex64 gs = pvi::gammaStirling(z);
        CHECK(std::abs(gs - g) / std::abs(g) < 1e-11);
    }

    // Multiprecision Stirling matches double Lanczos to double accuracy.
    const ComplexMP zmp(1.75, 0.5);
    const Complex64 gmp = pvi::toComplex64(pvi::gammaStirling(zmp));
    const Complex64 gd = pvi::gammaLanczos(Complex64(1.75, 0.5));
    CHECK(std::abs(gmp - gd) / std::abs(gd) < 1e-13);
}

TEST_CASE("graded series: arithmetic, derivative, evaluation") {
    using GS = pvi::GradedSeries<Complex64>;
    const Complex64 lambda(0.31, 0.12);
    pvi::GradedCaps caps{8, 8, 4};

    // f = x^lambda, g = x^(1 - lambda): f * g = x.
    auto f = GS::monomial(lambda, caps, {0, 1, 0}, Complex64(1));
    auto g = GS::monomial(lambda, caps, {1, -1, 0}, Complex64(1));
    auto fg = f * g;
    CHECK(std::abs(fg.coefficient({1, 0, 0}) - 1.0) < 1e-15);

    // derivative of x^(n + m lambda) ln^l x
    auto h = GS::monomial(lambda, caps, {2, 1, 1}, Complex64(1));
    auto dh = h.derivative();
    CHECK(std::abs(dh.coefficient({1, 1, 1}) - (2.0 + lambda)) < 1e-15);
    CHECK(std::abs(dh.coefficient({1, 1, 0}) - 1.0) < 1e-15);

    // evaluation agrees with direct formula
    const Complex64 x(0.03, 0.01);
    const Complex64 L = std::log(x);
    auto v = h.evaluate(L);
    const Complex64 expected = std::exp((2.0 + lambda) * L) * L;
    CHECK(std::abs(v - expected) < 1e-14 * std::abs(expected));

    // evaluate matches term sum for a small random series
    GS s(lambda, caps);
    s.insert({0, 0, 0}, Complex64(0.7, 0.1));
    s.insert({1, 1, 0}, Complex64(-0.3, 0.4));
    s.insert({2, -1, 1}, Complex64(0.2, -0.1));
    const Complex64 direct = Complex64(0.7, 0.1) +
                             Complex64(-0.3, 0.4) * std::exp((1.0 + lambda) * L) +
                             Complex64(0.2, -0.1) * std::exp((2.0 - lambda) * L) * L;
    CHECK(std::abs(s.evaluate(L) - direct) < 1e-14);
}

TEST_CASE("formatting: full-precision and scientific renders") {
    CHECK(pvi::g17(0.1) == std::string("0.10000000000000001"));
    CHECK(pvi::sci15(1.0 / 3.0).find("e-01") != std::string::npos);
    CHECK(pvi::g17(Complex64(1.0, -2.0)) == std::string("[1,-2]"));
}
