// Monodromy trace coordinates and the critical-exponent dictionary.
//
// A branch is labeled by the seven traces
//   p_mu  = 2 cos(pi theta_mu),  mu = 0, x, 1, inf,
//   p_ij  = Tr(M_i M_j),         ij = 0x, x1, 01,
// constrained to the Fricke cubic
//
//   W = p0x^2 + p01^2 + px1^2 + p0x p01 px1
//       - (p0 px + p1 pinf) p0x - (p0 p1 + px pinf) p01 - (px p1 + p0 pinf) px1
//       + p0^2 + px^2 + p1^2 + pinf^2 + p0 px p1 pinf - 4 = 0.
//
// The exponent of the x -> 0 critical behavior is sigma with
// 2 cos(pi sigma) = p0x, normalized to the strip 0 <= Re sigma <= 1; the
// boundary cases p0x = 2 (sigma = 0) and real p0x <= -2 (Re sigma = 1,
// sigma = 1 + 2 i nu) are flagged, since they carry different behavior
// classes.  The full family of exponents is sigma_N^{+-} = +-sigma + 2N.

#pragma once

#include <random>
#include <utility>

#include "pvi/errors.hpp"
#include "pvi/parameters.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

template <class C>
struct MonodromyData {
    C p0{}, px{}, p1{}, pInf{};
    C p0x{}, px1{}, p01{};
};

template <class C>
C frickeResidual(const MonodromyData<C>& m) {
    return m.p0x * m.p0x + m.p01 * m.p01 + m.px1 * m.px1 + m.p0x * m.p01 * m.px1 -
           (m.p0 * m.px + m.p1 * m.pInf) * m.p0x -
           (m.p0 * m.p1 + m.px * m.pInf) * m.p01 -
           (m.px * m.p1 + m.p0 * m.pInf) * m.px1 +
           m.p0 * m.p0 + m.px * m.px + m.p1 * m.p1 + m.pInf * m.pInf +
           m.p0 * m.px * m.p1 * m.pInf - C(4);
}

enum class PairTrace { P0x, Px1, P01 };

// Solve the Fricke cubic, quadratic in the chosen pair trace, returning both
// roots.  The other six traces are taken from m; the chosen slot is ignored.
template <class C>
std::pair<C, C> solveThirdTrace(const MonodromyData<C>& m, PairTrace which) {
    using std::sqrt;
    C b, c;
    const C common = m.p0 * m.p0 + m.px * m.px + m.p1 * m.p1 + m.pInf * m.pInf +
                     m.p0 * m.px * m.p1 * m.pInf - C(4);
    const C g0x = m.p0 * m.px + m.p1 * m.pInf;
    const C g01 = m.p0 * m.p1 + m.px * m.pInf;
    const C gx1 = m.px * m.p1 + m.p0 * m.pInf;
    switch (which) {
    case PairTrace::P01:
        b = m.p0x * m.px1 - g01;
        c = m.p0x * m.p0x + m.px1 * m.px1 - g0x * m.p0x - gx1 * m.px1 + common;
        break;
    case PairTrace::P0x:
        b = m.p01 * m.px1 - g0x;
        c = m.p01 * m.p01 + m.px1 * m.px1 - g01 * m.p01 - gx1 * m.px1 + common;
        break;
    case PairTrace::Px1:
        b = m.p0x * m.p01 - gx1;
        c = m.p0x * m.p0x + m.p01 * m.p01 - g0x * m.p0x - g01 * m.p01 + common;
        break;
    default:
        throw Error("Internal", "unknown pair trace");
    }
    const C disc = b * b - C(4) * c;
    const C root = sqrt(disc);
    return {(-b + root) / C(2), (-b - root) / C(2)};
}

// Assemble on-cubic data from theta and two pair traces; both solutions for
// the remaining trace are returned.
template <class C>
std::pair<MonodromyData<C>, MonodromyData<C>>
monodromyFromTheta(const Theta<C>& th, const C& p0x, const C& px1) {
    MonodromyData<C> m;
    const auto p = tracesFromTheta(th);
    m.p0 = p[0]; m.px = p[1]; m.p1 = p[2]; m.pInf = p[3];
    m.p0x = p0x; m.px1 = px1;
    const auto roots = solveThirdTrace(m, PairTrace::P01);
    MonodromyData<C> m2 = m;
    m.p01 = roots.first;
    m2.p01 = roots.second;
    return {m, m2};
}

enum class SigmaBoundary { Interior, SigmaZero, ReSigmaOne };

template <class C>
struct ExponentSigma {
    C sigma{};
    SigmaBoundary boundary = SigmaBoundary::Interior;

    const C& requireInterior() const {
        if (boundary == SigmaBoundary::SigmaZero)
            throw BoundaryClass("p = 2 gives sigma = 0: Taylor / logarithmic classes apply");
        if (boundary == SigmaBoundary::ReSigmaOne)
            throw BoundaryClass("real p <= -2 gives Re sigma = 1: inverse-oscillatory classes apply");
        return sigma;
    }

    // For Re sigma = 1 boundaries, sigma = 1 + 2 i nu with nu >= 0.
    RealOf<C> nu() const { return imagPart(sigma) / RealOf<C>(2); }
};

// 2 cos(pi sigma) = p, normalized to 0 <= Re sigma <= 1 with the boundary
// representatives sigma = i s and sigma = 1 + i s taken with s >= 0.
template <class C>
ExponentSigma<C> sigmaFromTrace(const C& p, double boundaryTol = 1e-13) {
    using std::acos;
    using std::abs;
    ExponentSigma<C> out;
    using R = RealOf<C>;
    out.sigma = acos(p / C(2)) / piC<C>();
    const double re = toDouble(realPart(out.sigma));
    const double mag = std::max(1.0, absAsDouble(p));
    if (std::abs(re) < boundaryTol * mag) {
        // Pure imaginary representative, fixed to Im >= 0.
        R s = imagPart(out.sigma);
        if (s < R(0)) s = -s;
        out.sigma = C(R(0), s);
        if (toDouble(s) < boundaryTol * mag) out.boundary = SigmaBoundary::SigmaZero;
    } else if (std::abs(re - 1.0) < boundaryTol * mag) {
        R s = imagPart(out.sigma);
        if (s < R(0)) s = -s;
        out.sigma = C(R(1), s);
        out.boundary = SigmaBoundary::ReSigmaOne;
    }
    return out;
}

// sigma_N^{+-} = +-sigma + 2N.
template <class C>
C sigmaFamilyMember(const C& sigma, int N, int sign) {
    return C(sign >= 0 ? 1 : -1) * sigma + C(2 * N);
}

// Oscillation data of the x -> 0 behavior with exponent sigma:
//   A_AB^2 = (sigma^2 - (theta0-thetax)^2)(sigma^2 - (theta0+thetax)^2) / (4 sigma^2),
//   B      = (theta0^2 - thetax^2 + sigma^2) / (2 sigma^2),
// and the sine-form amplitude A_sin with A_sin^2 = A_AB^2 / sigma^2
//                                               = B^2 - theta0^2 / sigma^2.
template <class C>
C amplitudeSquaredAB(const C& t0, const C& tx, const C& sigma) {
    const C s2 = sigma * sigma;
    if (absAsDouble(sigma) == 0.0)
        throw DivisionByZero("amplitudeSquaredAB: sigma = 0");
    const C dm = t0 - tx, dp = t0 + tx;
    return (s2 - dm * dm) * (s2 - dp * dp) / (C(4) * s2);
}

template <class C>
C coefficientB(const C& t0, const C& tx, const C& sigma) {
    const C s2 = sigma * sigma;
    if (absAsDouble(sigma) == 0.0)
        throw DivisionByZero("coefficientB: sigma = 0");
    return (t0 * t0 - tx * tx + s2) / (C(2) * s2);
}

template <class C>
C sinAmplitudeSquared(const C& t0, const C& tx, const C& sigma) {
    return amplitudeSquaredAB(t0, tx, sigma) / (sigma * sigma);
}

// Product of the integration constants of the sigma and -sigma
// representations of one branch: a(sigma) a(-sigma) = A_AB^2 / (4 sigma^2).
template <class C>
C aSigmaProduct(const C& t0, const C& tx, const C& sigma) {
    const C a2 = amplitudeSquaredAB(t0, tx, sigma);
    const double scale = std::pow(std::max({absAsDouble(sigma * sigma),
                                            absAsDouble(t0 * t0),
                                            absAsDouble(tx * tx), 1e-30}),
                                  2);
    if (absAsDouble(a2) < 1e-14 * scale)
        throw SingularA("A^2 = 0: sigma^2 = (theta0 +- thetax)^2, gauge product degenerates");
    return a2 / (C(4) * sigma * sigma);
}

// Taylor-branch connection at p0x = 2 (theta0 = thetax = 0):
// the branch y = a x + a(a-1)(gamma - alpha - 1/2) x^2 + ... has
//   a   = (2 cos(pi sqrt(2 gamma)) - p01) / (4 cc),
//   p01 = 2 cos(pi sqrt(2 gamma)) - 4 a cc,
//   px1 = 2 cos(pi sqrt(2 gamma)) + 4 (a-1) cc,
//   cc  = cos(pi/2 (sqrt(2a') + sqrt(2g'))) cos(pi/2 (sqrt(2a') - sqrt(2g')))
// with a' = alpha, g' = gamma.
template <class C>
C taylorCosineProduct(const Coefficients<C>& c) {
    using std::cos;
    using std::sqrt;
    const C sa = sqrt(C(2) * c.alpha);
    const C sg = sqrt(C(2) * c.gamma);
    const C half = makeComplex<C>(0.5);
    return cos(piC<C>() * half * (sa + sg)) * cos(piC<C>() * half * (sa - sg));
}

template <class C>
C taylorBranchConnection(const Coefficients<C>& c, const C& p01) {
    using std::cos;
    using std::sqrt;
    const C cc = taylorCosineProduct(c);
    if (absAsDouble(cc) < 1e-13)
        throw DegenerateDenominator("taylorBranchConnection: vanishing cosine product");
    const C cg = C(2) * cos(piC<C>() * sqrt(C(2) * c.gamma));
    return (cg - p01) / (C(4) * cc);
}

template <class C>
MonodromyData<C> taylorBranchTraces(const Coefficients<C>& c, const C& a) {
    using std::cos;
    using std::sqrt;
    const C cc = taylorCosineProduct(c);
    const C cg = C(2) * cos(piC<C>() * sqrt(C(2) * c.gamma));
    MonodromyData<C> m;
    m.p0 = C(2);
    m.px = C(2);
    m.p1 = cg;
    m.pInf = C(-2) * cos(piC<C>() * sqrt(C(2) * c.alpha));
    m.p0x = C(2);
    m.p01 = cg - C(4) * a * cc;
    m.px1 = cg + C(4) * (a - C(1)) * cc;
    return m;
}

// Uniform random on-cubic sample: real p_mu from random theta, real p0x, px1
// in (-2, 2), p01 from the cubic (root chosen by a coin flip).  Used by the
// invariance checks.
template <class C>
MonodromyData<C> randomOnCubic(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.05, 1.95);
    std::uniform_real_distribution<double> trace(-1.95, 1.95);
    Theta<C> th;
    th.t0 = makeComplex<C>(angle(rng));
    th.tx = makeComplex<C>(angle(rng));
    th.t1 = makeComplex<C>(angle(rng));
    th.tinf = makeComplex<C>(angle(rng));
    auto both = monodromyFromTheta(th, makeComplex<C>(trace(rng)), makeComplex<C>(trace(rng)));
    return (rng() & 1u) ? both.second : both.first;
}

} // namespace pvi
