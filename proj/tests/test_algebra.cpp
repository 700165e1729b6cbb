// Parameter dictionary, monodromy traces on the Fricke cubic, the sigma
// exponent dictionary, symmetry actions, and the two forms of the equation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <map>
#include <random>

#include "pvi/monodromy.hpp"
#include "pvi/parameters.hpp"
#include "pvi/pvieq.hpp"
#include "pvi/symmetry.hpp"

using pvi::Complex64;
using Theta = pvi::Theta<Complex64>;
using Coeffs = pvi::Coefficients<Complex64>;
using Mono = pvi::MonodromyData<Complex64>;

namespace {

std::mt19937_64 rng(424243u);

Complex64 randomComplex(double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

Theta randomTheta() {
    return {randomComplex(), randomComplex(), randomComplex(), randomComplex() + 2.0};
}

double maxSeriesDiff(const pvi::GradedSeries<Complex64>& a, const pvi::GradedSeries<Complex64>& b) {
    double m = 0.0;
    for (const auto& [k, c] : a.terms()) m = std::max(m, std::abs(c - b.coefficient(k)));
    for (const auto& [k, c] : b.terms()) m = std::max(m, std::abs(c - a.coefficient(k)));
    return m;
}

double maxCoeff(const pvi::GradedSeries<Complex64>& a) {
    double m = 0.0;
    for (const auto& [k, c] : a.terms()) m = std::max(m, std::abs(c));
    return m;
}

} // namespace

TEST_CASE("theta <-> coefficient dictionary round trip") {
    for (int t = 0; t < 50; ++t) {
        const Theta th = randomTheta();
        const Coeffs c = pvi::coefficientsFromTheta(th);
        const Theta back = pvi::thetaFromCoefficients(c);
        const Coeffs c2 = pvi::coefficientsFromTheta(back);
        CHECK(std::abs(c.alpha - c2.alpha) < 1e-12);
        CHECK(std::abs(c.beta - c2.beta) < 1e-12);
        CHECK(std::abs(c.gamma - c2.gamma) < 1e-12);
        CHECK(std::abs(c.delta - c2.delta) < 1e-12);
        // canonical representative is idempotent
        const Theta canon = pvi::canonicalTheta(th);
        const Theta canon2 = pvi::canonicalTheta(canon);
        CHECK(std::abs(canon.t0 - canon2.t0) < 1e-15);
        CHECK(std::abs(canon.tinf - canon2.tinf) < 1e-15);
        CHECK(pvi::realPart(canon.t0) >= 0.0);
        CHECK(pvi::realPart(canon.tinf - Complex64(1)) >= 0.0);
    }
    CHECK_THROWS_AS(pvi::requireThetaInfNonzero(Theta{1, 1, 1, 0}), pvi::ThetaInfZero);
}

TEST_CASE("Fricke cubic: hand-checked residuals") {
    auto make = [](double p0, double px, double p1, double pInf, double p0x, double px1,
                   double p01) {
        return Mono{Complex64(p0), Complex64(px), Complex64(p1), Complex64(pInf),
                    Complex64(p0x), Complex64(px1), Complex64(p01)};
    };
    CHECK(std::abs(pvi::frickeResidual(make(2, 2, 2, 2, 2, 2, 2))) < 1e-15);
    CHECK(std::abs(pvi::frickeResidual(make(2, 2, 2, -2, 1, 1, 1))) < 1e-15);
    CHECK(std::abs(pvi::frickeResidual(make(2, 2, 2, 2, 0, 0, 0)) - 28.0) < 1e-15);
}

TEST_CASE("third trace solver lands on the cubic, both roots") {
    for (int t = 0; t < 100; ++t) {
        const Theta th = randomTheta();
        const auto both = pvi::monodromyFromTheta(th, randomComplex(1.9), randomComplex(1.9));
        CHECK(std::abs(pvi::frickeResidual(both.first)) < 1e-9);
        CHECK(std::abs(pvi::frickeResidual(both.second)) < 1e-9);

        // re-solve each remaining slot from the first solution
        for (auto which : {pvi::PairTrace::P0x, pvi::PairTrace::Px1, pvi::PairTrace::P01}) {
            const auto roots = pvi::solveThirdTrace(both.first, which);
            Mono m1 = both.first, m2 = both.first;
            switch (which) {
            case pvi::PairTrace::P0x: m1.p0x = roots.first; m2.p0x = roots.second; break;
            case pvi::PairTrace::Px1: m1.px1 = roots.first; m2.px1 = roots.second; break;
            case pvi::PairTrace::P01: m1.p01 = roots.first; m2.p01 = roots.second; break;
            }
            CHECK(std::abs(pvi::frickeResidual(m1)) < 1e-8);
            CHECK(std::abs(pvi::frickeResidual(m2)) < 1e-8);
        }
    }
    for (int t = 0; t < 50; ++t)
        CHECK(std::abs(pvi::frickeResidual(pvi::randomOnCubic<Complex64>(rng))) < 1e-9);
}

TEST_CASE("sigma dictionary: strips, boundaries, families") {
    // interior value round trip
    const Complex64 sigma(0.3, 0.05);
    const Complex64 p = 2.0 * std::cos(std::acos(-1.0) * sigma);
    const auto s = pvi::sigmaFromTrace(p);
    CHECK(s.boundary == pvi::SigmaBoundary::Interior);
    CHECK(std::abs(s.sigma - sigma) < 1e-12);
    CHECK(std::abs(s.requireInterior() - sigma) < 1e-12);

    // p = 2: sigma = 0 boundary
    const auto s2 = pvi::sigmaFromTrace(Complex64(2.0));
    CHECK(s2.boundary == pvi::SigmaBoundary::SigmaZero);
    CHECK_THROWS_AS(s2.requireInterior(), pvi::BoundaryClass);

    // real p < -2: Re sigma = 1 boundary, sigma = 1 + 2 i nu
    const auto s3 = pvi::sigmaFromTrace(Complex64(-2.5));
    CHECK(s3.boundary == pvi::SigmaBoundary::ReSigmaOne);
    CHECK(std::abs(s3.sigma.real() - 1.0) < 1e-13);
    const double nu = s3.nu();
    CHECK(nu > 0.0);
    CHECK(std::abs(-2.0 * std::cosh(2.0 * std::acos(-1.0) * nu) - (-2.5)) < 1e-12);
    CHECK_THROWS_AS(s3.requireInterior(), pvi::BoundaryClass);

    // real p > 2: purely imaginary interior representative (oscillatory class)
    const auto s4 = pvi::sigmaFromTrace(Complex64(2.5));
    CHECK(s4.boundary == pvi::SigmaBoundary::Interior);
    CHECK(std::abs(s4.sigma.real()) < 1e-13);
    CHECK(s4.sigma.imag() > 0.0);
    CHECK(std::abs(2.0 * std::cosh(std::acos(-1.0) * s4.sigma.imag()) - 2.5) < 1e-12);

    // family members
    CHECK(std::abs(pvi::sigmaFamilyMember(sigma, 2, +1) - (sigma + 4.0)) < 1e-15);
    CHECK(std::abs(pvi::sigmaFamilyMember(sigma, -1, -1) - (-sigma - 2.0)) < 1e-15);

    // p0x = 2 cos(pi sigma) is invariant under sigma -> sigma_N^{+-}
    for (int N : {-2, 1, 3}) {
        const Complex64 sp = pvi::sigmaFamilyMember(sigma, N, +1);
        const Complex64 sm = pvi::sigmaFamilyMember(sigma, N, -1);
        CHECK(std::abs(2.0 * std::cos(std::acos(-1.0) * sp) - p) < 1e-10);
        CHECK(std::abs(2.0 * std::cos(std::acos(-1.0) * sm) - p) < 1e-10);
    }
}

TEST_CASE("oscillation amplitudes: algebraic identities") {
    for (int t = 0; t < 50; ++t) {
        const Complex64 t0 = randomComplex(), tx = randomComplex();
        const Complex64 sigma = randomComplex() + Complex64(2.5, 0); // keep away from 0
        const Complex64 a2 = pvi::amplitudeSquaredAB(t0, tx, sigma);
        const Complex64 b = pvi::coefficientB(t0, tx, sigma);
        const Complex64 asin2 = pvi::sinAmplitudeSquared(t0, tx, sigma);
        // A_sin^2 = B^2 - theta0^2 / sigma^2
        CHECK(std::abs(asin2 - (b * b - t0 * t0 / (sigma * sigma))) < 1e-12);
        // and A_sin^2 = A_AB^2 / sigma^2
        CHECK(std::abs(asin2 - a2 / (sigma * sigma)) < 1e-12);
        // gauge product
        const Complex64 prod = pvi::aSigmaProduct(t0, tx, sigma);
        CHECK(std::abs(prod - a2 / (4.0 * sigma * sigma)) < 1e-13);
    }
    // reference value: sigma = 1/2, theta0 = thetax = 0 gives 1/16
    const Complex64 ref = pvi::aSigmaProduct(Complex64(0), Complex64(0), Complex64(0.5));
    CHECK(std::abs(ref - 0.0625) < 1e-15);
    // degenerate amplitude: sigma = theta0 + thetax
    CHECK_THROWS_AS(pvi::aSigmaProduct(Complex64(0.3), Complex64(0.4), Complex64(0.7)),
                    pvi::SingularA);
}

TEST_CASE("Taylor-branch connection: traces are on the cubic and invert") {
    std::uniform_real_distribution<double> u(0.2, 1.8);
    for (int t = 0; t < 50; ++t) {
        Coeffs c{};
        c.alpha = Complex64(u(rng));
        c.gamma = Complex64(u(rng));
        c.beta = Complex64(0);
        c.delta = Complex64(0.5);
        const Complex64 a = randomComplex(2.0) + Complex64(0.1, 0.1);
        const Mono m = pvi::taylorBranchTraces(c, a);
        CHECK(std::abs(m.p0 - 2.0) < 1e-15);
        CHECK(std::abs(m.px - 2.0) < 1e-15);
        CHECK(std::abs(m.p0x - 2.0) < 1e-15);
        CHECK(std::abs(pvi::frickeResidual(m)) < 1e-10);
        CHECK(std::abs(pvi::taylorBranchConnection(c, m.p01) - a) < 1e-10);
    }
}

TEST_CASE("symmetry: theta and point maps are involutions") {
    for (auto op : {pvi::SymmetryOp::Permute01, pvi::SymmetryOp::InvertX, pvi::SymmetryOp::SwapXY}) {
        for (int t = 0; t < 20; ++t) {
            const Theta th = randomTheta();
            const Theta back = pvi::applyToTheta(op, pvi::applyToTheta(op, th));
            CHECK(std::abs(back.t0 - th.t0) < 1e-15);
            CHECK(std::abs(back.tx - th.tx) < 1e-15);
            CHECK(std::abs(back.t1 - th.t1) < 1e-15);
            CHECK(std::abs(back.tinf - th.tinf) < 1e-15);

            const Complex64 x = randomComplex() + Complex64(3, 0);
            const Complex64 y = randomComplex() + Complex64(0, 2);
            const auto [x1, y1] = pvi::applyToPoint(op, x, y);
            const auto [x2, y2] = pvi::applyToPoint(op, x1, y1);
            CHECK(std::abs(x2 - x) < 1e-13);
            CHECK(std::abs(y2 - y) < 1e-13);
        }
    }
}

TEST_CASE("symmetry: trace actions preserve the cubic; basis follows theta") {
    for (auto op : {pvi::SymmetryOp::Permute01, pvi::SymmetryOp::InvertX, pvi::SymmetryOp::SwapXY}) {
        for (int t = 0; t < 50; ++t) {
            const Mono m = pvi::randomOnCubic<Complex64>(rng);
            const Mono r = pvi::applyToTraces(op, m);
            CHECK(std::abs(pvi::frickeResidual(r)) < 1e-8);
        }
        // basis traces of the image equal traces of the transformed theta
        const Theta th = randomTheta();
        const auto both = pvi::monodromyFromTheta(th, randomComplex(1.9), randomComplex(1.9));
        const Mono r = pvi::applyToTraces(op, both.first);
        const auto pt = pvi::tracesFromTheta(pvi::applyToTheta(op, th));
        CHECK(std::abs(r.p0 - pt[0]) < 1e-12);
        CHECK(std::abs(r.px - pt[1]) < 1e-12);
        CHECK(std::abs(r.p1 - pt[2]) < 1e-12);
        CHECK(std::abs(r.pInf - pt[3]) < 1e-12);
    }
}

TEST_CASE("symmetry: trace involutions, and the x->1/x double-application root flip") {
    for (int t = 0; t < 30; ++t) {
        const Mono m = pvi::randomOnCubic<Complex64>(rng);

        for (auto op : {pvi::SymmetryOp::Permute01, pvi::SymmetryOp::SwapXY}) {
            const Mono r = pvi::applyToTraces(op, pvi::applyToTraces(op, m));
            CHECK(std::abs(r.p0x - m.p0x) < 1e-11);
            CHECK(std::abs(r.px1 - m.px1) < 1e-11);
            CHECK(std::abs(r.p01 - m.p01) < 1e-11);
        }

        // x -> 1/x applied twice is the analytic-continuation action on a
        // branch: px1 is fixed, p01 flips to the second root of its
        // quadratic (sum = p0 p1 + px pInf - p0x px1), and p0x then flips to
        // the second root of its quadratic computed with the NEW p01
        // (sum = p0 px + p1 pInf - p01'' px1).
        const Mono r = pvi::applyToTraces(pvi::SymmetryOp::InvertX,
                                          pvi::applyToTraces(pvi::SymmetryOp::InvertX, m));
        CHECK(std::abs(r.px1 - m.px1) < 1e-11);
        const Complex64 p01Sum = m.p0 * m.p1 + m.px * m.pInf - m.p0x * m.px1;
        CHECK(std::abs((r.p01 + m.p01) - p01Sum) < 1e-10);
        const Complex64 p0xSum = m.p0 * m.px + m.p1 * m.pInf - r.p01 * m.px1;
        CHECK(std::abs((r.p0x + m.p0x) - p0xSum) < 1e-10);
        CHECK(std::abs(pvi::frickeResidual(r)) < 1e-8);
    }
}

TEST_CASE("equation forms: cleared residual vanishes on the division form") {
    for (int t = 0; t < 100; ++t) {
        const Complex64 x = randomComplex(0.5) + Complex64(2.2, 0.7);
        const Complex64 y = randomComplex(0.5) + Complex64(0.4, 1.3);
        const Complex64 yp = randomComplex();
        const Coeffs c{randomComplex(), randomComplex(), randomComplex(), randomComplex()};
        const Complex64 ypp = pvi::rhsSecondDerivative(x, y, yp, c);
        const Complex64 r = pvi::clearedResidual(x, y, yp, ypp, c);
        CHECK(std::abs(r) < 1e-9);
    }
}

TEST_CASE("equation forms: y = sqrt(x) solves the alpha+beta=0, gamma+delta=1/2 family") {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const Complex64 alpha(u(rng), u(rng)), gamma(u(rng), u(rng));
        const Coeffs c{alpha, -alpha, gamma, Complex64(0.5) - gamma};
        const Complex64 x = randomComplex(0.4) + Complex64(1.8, 0.9);
        const Complex64 y = std::sqrt(x);
        const Complex64 yp = 0.5 / y;
        const Complex64 ypp = -0.25 / (y * y * y);
        CHECK(std::abs(pvi::clearedResidual(x, y, yp, ypp, c)) < 1e-12);
        CHECK(std::abs(pvi::rhsSecondDerivative(x, y, yp, c) - ypp) < 1e-12);
    }

    // The same solution as a graded series with lambda = 1/2.  Keys (n, m)
    // and (n + 1, m - 2) carry the same exponent n + m/2, so residual
    // coefficients must be summed per exponent value before they cancel.
    pvi::GradedCaps caps{10, 6, 2};
    const Complex64 half(0.5);
    auto y = pvi::GradedSeries<Complex64>::monomial(half, caps, {0, 1, 0}, Complex64(1));
    const Coeffs c{Complex64(0.125), Complex64(-0.125), Complex64(0.125), Complex64(0.375)};
    const auto parts = pvi::residualOnSeries(y, c, false);
    std::map<long long, Complex64> byExponent;
    for (const auto& [k, v] : parts.value.terms()) {
        CHECK(k.l == 0);
        byExponent[2LL * k.n + k.m] += v;
    }
    for (const auto& [e, sum] : byExponent) {
        (void)e;
        CHECK(std::abs(sum) < 1e-13);
    }
}

TEST_CASE("equation forms: linearization matches a central difference") {
    // maxM is generous because the residual is degree six in y and the
    // m-grading does not shift down under multiplication the way n does.
    pvi::GradedCaps caps{8, 40, 4};
    const Complex64 lambda(0.3, 0.0);
    pvi::GradedSeries<Complex64> y(lambda, caps);
    y.insert({0, 1, 0}, Complex64(0.8, 0.1));
    y.insert({1, 0, 0}, Complex64(0.3, -0.2));
    y.insert({1, 1, 0}, Complex64(-0.2, 0.05));
    y.insert({1, 2, 0}, Complex64(0.1, 0.02));

    // Direction keys start at n = 2 so that v'' stays at n >= 0 and both
    // evaluation orders see identical truncation.
    pvi::GradedSeries<Complex64> v(lambda, caps);
    v.insert({2, -1, 0}, Complex64(0.7, -0.3));
    v.insert({3, 1, 0}, Complex64(-0.4, 0.6));
    v.insert({3, 0, 1}, Complex64(0.25, 0.15));

    const Coeffs c{Complex64(0.4, 0.1), Complex64(-0.3, 0.2), Complex64(0.2, -0.1),
                   Complex64(0.1, 0.3)};

    const auto parts = pvi::residualOnSeries(y, c, true);
    const auto linear = parts.dY * v + parts.dYp * v.derivative() + parts.dYpp * v.derivative().derivative();

    const double eps = 1e-6;
    const auto plus = pvi::residualOnSeries(y + v * Complex64(eps), c, false).value;
    const auto minus = pvi::residualOnSeries(y + v * Complex64(-eps), c, false).value;
    auto diff = (plus - minus) * Complex64(0.5 / eps);

    CHECK(maxSeriesDiff(diff, linear) < 1e-7 * std::max(1.0, maxCoeff(linear)));
}

TEST_CASE("equation forms: division-form and series residual agree pointwise") {
    // With caps generous enough that no truncation occurs, the residual of a
    // short series evaluated numerically equals the pointwise cleared
    // residual of the evaluated series and derivatives.
    pvi::GradedCaps caps{30, 12, 4};
    const Complex64 lambda(0.3, 0.0);
    pvi::GradedSeries<Complex64> y(lambda, caps);
    y.insert({0, 1, 0}, Complex64(0.8, 0.1));
    y.insert({1, 0, 0}, Complex64(0.3, -0.2));
    const Coeffs c{Complex64(0.4), Complex64(-0.3), Complex64(0.2), Complex64(0.1)};

    const auto parts = pvi::residualOnSeries(y, c, false);
    const Complex64 x(0.2, 0.1);
    const Complex64 L = std::log(x);
    const Complex64 yv = y.evaluate(L);
    const Complex64 ypv = y.derivative().evaluate(L);
    const Complex64 yppv = y.derivative().derivative().evaluate(L);
    const Complex64 direct = pvi::clearedResidual(x, yv, ypv, yppv, c);
    CHECK(std::abs(parts.value.evaluate(L) - direct) < 1e-10 * std::max(1.0, std::abs(direct)));
}
