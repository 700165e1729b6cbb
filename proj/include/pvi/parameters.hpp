// Parameter dictionaries for Painleve VI.
//
// The equation coefficients (alpha, beta, gamma, delta) and the angular
// parameters theta = (theta0, thetax, theta1, thetaInf) are related by
//
//   alpha = (thetaInf - 1)^2 / 2,   -beta = theta0^2 / 2,
//   gamma = theta1^2 / 2,           1/2 - delta = thetax^2 / 2,
//
// with the sign equivalences theta_k -> -theta_k (k = 0, x, 1) and
// thetaInf -> 2 - thetaInf leaving the coefficients fixed.  The canonical
// representative takes Re theta_k >= 0 (ties broken by Im >= 0) and
// Re(thetaInf - 1) >= 0, which in particular never produces thetaInf = 0.
//
// Monodromy traces: p_mu = 2 cos(pi theta_mu).

#pragma once

#include <array>

#include "pvi/errors.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

template <class C>
struct Theta {
    C t0{}, tx{}, t1{}, tinf{};
};

template <class C>
struct Coefficients {
    C alpha{}, beta{}, gamma{}, delta{};
};

template <class C>
Coefficients<C> coefficientsFromTheta(const Theta<C>& th) {
    Coefficients<C> c;
    const C half = makeComplex<C>(0.5);
    c.alpha = half * (th.tinf - C(1)) * (th.tinf - C(1));
    c.beta  = -half * th.t0 * th.t0;
    c.gamma = half * th.t1 * th.t1;
    c.delta = half - half * th.tx * th.tx;
    return c;
}

namespace detail {

// Principal-like branch: Re >= 0, ties broken by Im >= 0.
template <class C>
C canonicalSign(const C& v) {
    const double re = toDouble(realPart(v));
    const double im = toDouble(imagPart(v));
    if (re < 0.0 || (re == 0.0 && im < 0.0)) return -v;
    return v;
}

} // namespace detail

template <class C>
Theta<C> canonicalTheta(const Theta<C>& th) {
    Theta<C> out;
    out.t0 = detail::canonicalSign(th.t0);
    out.tx = detail::canonicalSign(th.tx);
    out.t1 = detail::canonicalSign(th.t1);
    out.tinf = C(1) + detail::canonicalSign(th.tinf - C(1));
    return out;
}

template <class C>
Theta<C> thetaFromCoefficients(const Coefficients<C>& c) {
    using std::sqrt;
    Theta<C> th;
    th.t0 = sqrt(C(-2) * c.beta);
    th.tx = sqrt(C(1) - C(2) * c.delta);
    th.t1 = sqrt(C(2) * c.gamma);
    th.tinf = C(1) + sqrt(C(2) * c.alpha);
    return canonicalTheta(th);
}

// Throws if the representative has thetaInf = 0 (the parametrization excludes
// it; canonicalTheta re-represents such input as thetaInf = 2).
template <class C>
void requireThetaInfNonzero(const Theta<C>& th, double tol = 0.0) {
    if (absAsDouble(th.tinf) <= tol)
        throw ThetaInfZero("thetaInf = 0 is excluded; use the equivalent representative thetaInf = 2");
}

template <class C>
C traceFromTheta(const C& theta) {
    using std::cos;
    return C(2) * cos(piC<C>() * theta);
}

template <class C>
std::array<C, 4> tracesFromTheta(const Theta<C>& th) {
    return {traceFromTheta(th.t0), traceFromTheta(th.tx),
            traceFromTheta(th.t1), traceFromTheta(th.tinf)};
}

} // namespace pvi
