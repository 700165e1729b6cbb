// The Painleve VI equation in two computational forms.
//
// Division form (for numerical integration):
//
//   y'' = 1/2 (1/y + 1/(y-1) + 1/(y-x)) y'^2 - (1/x + 1/(x-1) + 1/(y-x)) y'
//         + y(y-1)(y-x) / (x^2 (x-1)^2) *
//           [ alpha + beta x / y^2 + gamma (x-1)/(y-1)^2 + delta x(x-1)/(y-x)^2 ].
//
// Cleared polynomial form (for series work and residual measurements),
// obtained by multiplying through by 2 x^2 (x-1)^2 y (y-1)(y-x):
//
//   R = 2 x^2(x-1)^2 y(y-1)(y-x) y''
//       - x^2(x-1)^2 [ (y-1)(y-x) + y(y-x) + y(y-1) ] y'^2
//       + 2 [ x(x-1)^2 + x^2(x-1) ] y(y-1)(y-x) y' + 2 x^2(x-1)^2 y(y-1) y'
//       - 2 [ alpha y^2(y-1)^2(y-x)^2 + beta x (y-1)^2(y-x)^2
//             + gamma (x-1) y^2 (y-x)^2 + delta x(x-1) y^2 (y-1)^2 ].
//
// R vanishes identically on solutions; its partial derivatives with respect
// to (y, y', y'') drive the linearized recursions of the series engine.

#pragma once

#include "pvi/gradedseries.hpp"
#include "pvi/parameters.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

// ---------------------------------------------------------------------------
// Pointwise forms.
// ---------------------------------------------------------------------------

template <class C>
C rhsSecondDerivative(const C& x, const C& y, const C& yp, const Coefficients<C>& cf) {
    const C one(1), half = makeComplex<C>(0.5);
    const C ym1 = y - one, ymx = y - x, xm1 = x - one;
    if (absAsDouble(x) == 0.0 || absAsDouble(xm1) == 0.0)
        throw DivisionByZero("rhsSecondDerivative: x at a critical point");
    if (absAsDouble(y) == 0.0 || absAsDouble(ym1) == 0.0 || absAsDouble(ymx) == 0.0)
        throw DivisionByZero("rhsSecondDerivative: y at a singular value");
    const C term1 = half * (one / y + one / ym1 + one / ymx) * yp * yp;
    const C term2 = (one / x + one / xm1 + one / ymx) * yp;
    const C pref = y * ym1 * ymx / (x * x * xm1 * xm1);
    const C bracket = cf.alpha + cf.beta * x / (y * y) + cf.gamma * xm1 / (ym1 * ym1) +
                      cf.delta * x * xm1 / (ymx * ymx);
    return term1 - term2 + pref * bracket;
}

template <class C>
C clearedResidual(const C& x, const C& y, const C& yp, const C& ypp, const Coefficients<C>& cf) {
    const C one(1), two(2);
    const C xm1 = x - one;
    const C x2 = x * x, xm12 = xm1 * xm1;
    const C ym1 = y - one, ymx = y - x;
    const C A = y * ym1, Bq = y * ymx, Cq = ym1 * ymx;
    const C P3 = A * ymx;
    const C S = A + Bq + Cq;
    const C X2XM12 = x2 * xm12;
    return two * X2XM12 * P3 * ypp - X2XM12 * S * yp * yp +
           two * (x * xm12 + x2 * xm1) * P3 * yp + two * X2XM12 * A * yp -
           two * (cf.alpha * P3 * P3 + cf.beta * x * Cq * Cq + cf.gamma * xm1 * Bq * Bq +
                  cf.delta * x * xm1 * A * A);
}

// ---------------------------------------------------------------------------
// Graded-series forms.
// ---------------------------------------------------------------------------

template <class C>
struct ResidualParts {
    GradedSeries<C> value;  // R(y)
    GradedSeries<C> dY;     // dR/dy   at y
    GradedSeries<C> dYp;    // dR/dy'  at y
    GradedSeries<C> dYpp;   // dR/dy'' at y
};

namespace detail {

template <class C>
struct XPolys {
    GradedSeries<C> one, x, xm1, x2, xm12, x2xm12, xxm12, x2xm1, xxm1, onePlusX;
    XPolys(const C& lambda, GradedCaps caps) {
        using GS = GradedSeries<C>;
        one     = GS::xPolynomial(lambda, caps, {{0, 1.0}});
        x       = GS::xPolynomial(lambda, caps, {{1, 1.0}});
        xm1     = GS::xPolynomial(lambda, caps, {{1, 1.0}, {0, -1.0}});
        x2      = GS::xPolynomial(lambda, caps, {{2, 1.0}});
        xm12    = GS::xPolynomial(lambda, caps, {{2, 1.0}, {1, -2.0}, {0, 1.0}});
        x2xm12  = GS::xPolynomial(lambda, caps, {{4, 1.0}, {3, -2.0}, {2, 1.0}});
        xxm12   = GS::xPolynomial(lambda, caps, {{3, 1.0}, {2, -2.0}, {1, 1.0}});
        x2xm1   = GS::xPolynomial(lambda, caps, {{3, 1.0}, {2, -1.0}});
        xxm1    = GS::xPolynomial(lambda, caps, {{2, 1.0}, {1, -1.0}});
        onePlusX= GS::xPolynomial(lambda, caps, {{0, 1.0}, {1, 1.0}});
    }
};

} // namespace detail

// Residual and linearization of the cleared form on a graded series y.
// computePartials = false skips the derivative series (cheaper).
template <class C>
ResidualParts<C> residualOnSeries(const GradedSeries<C>& y, const Coefficients<C>& cf,
                                  bool computePartials) {
    using GS = GradedSeries<C>;
    const C lambda = y.lambda();
    const GradedCaps caps = y.caps();
    detail::XPolys<C> P(lambda, caps);

    const GS yp = y.derivative();
    const GS ypp = yp.derivative();

    const GS ym1 = y - P.one;
    const GS ymx = y - P.x;
    const GS A = y * ym1;
    const GS Bq = y * ymx;
    const GS Cq = ym1 * ymx;
    const GS P3 = A * ymx;
    const GS S = A + Bq + Cq;

    const GS yp2 = yp * yp;
    const GS mixed = P.xxm12 + P.x2xm1;

    ResidualParts<C> out;
    out.value = (P.x2xm12 * (P3 * ypp)) * C(2) - P.x2xm12 * (S * yp2) +
                (mixed * (P3 * yp)) * C(2) + (P.x2xm12 * (A * yp)) * C(2) -
                (P3 * P3 * cf.alpha + P.x * (Cq * Cq) * cf.beta +
                 P.xm1 * (Bq * Bq) * cf.gamma + P.xxm1 * (A * A) * cf.delta) * C(2);

    if (computePartials) {
        // dA/dy = 2y - 1, dB/dy = 2y - x, dC/dy = 2y - 1 - x,
        // dP3/dy = S, dS/dy = 6y - 2 - 2x.
        const GS dA = y * C(2) - P.one;
        const GS dB = y * C(2) - P.x;
        const GS dC = y * C(2) - P.one - P.x;
        const GS dS = y * C(6) - P.onePlusX * C(2);

        out.dYpp = P.x2xm12 * P3 * C(2);
        out.dYp = -(P.x2xm12 * (S * yp)) * C(2) + mixed * P3 * C(2) + P.x2xm12 * A * C(2);
        out.dY = (P.x2xm12 * (ypp * S)) * C(2) - P.x2xm12 * (yp2 * dS) +
                 (mixed * (yp * S)) * C(2) + (P.x2xm12 * (yp * dA)) * C(2) -
                 (P3 * S * cf.alpha + P.x * (Cq * dC) * cf.beta + P.xm1 * (Bq * dB) * cf.gamma +
                  P.xxm1 * (A * dA) * cf.delta) * C(4);
    }
    return out;
}

} // namespace pvi
