// The three birational symmetries used to transport x -> 0 behavior to
// x = 1 and x = infinity and to invert the solution.
//
//   Permute01:  x' = 1 - x,  y'(x') = 1 - y(x),
//               theta' = (theta1, thetax, theta0, thetaInf);
//   InvertX:    x' = 1/x,    y'(x') = y(x)/x,
//               theta' = (theta0, theta1, thetax, thetaInf);
//   SwapXY:     x' = x,      y'(x') = x/y(x),
//               theta' = (thetaInf - 1, theta1, thetax, theta0 + 1).
//
// Each map is an involution.  The induced action on the pair traces is
// polynomial (a Fricke-cubic automorphism); the basis traces p_mu follow the
// theta permutation, with 2 cos(pi(theta -+ 1)) = -2 cos(pi theta) producing
// sign flips for SwapXY.

#pragma once

#include <utility>

#include "pvi/monodromy.hpp"
#include "pvi/parameters.hpp"

namespace pvi {

enum class SymmetryOp { Permute01, InvertX, SwapXY };

inline const char* symmetryName(SymmetryOp op) {
    switch (op) {
    case SymmetryOp::Permute01: return "permute01";
    case SymmetryOp::InvertX:   return "invertx";
    case SymmetryOp::SwapXY:    return "swapxy";
    }
    return "?";
}

template <class C>
Theta<C> applyToTheta(SymmetryOp op, const Theta<C>& th) {
    Theta<C> r;
    switch (op) {
    case SymmetryOp::Permute01:
        r.t0 = th.t1; r.tx = th.tx; r.t1 = th.t0; r.tinf = th.tinf;
        break;
    case SymmetryOp::InvertX:
        r.t0 = th.t0; r.tx = th.t1; r.t1 = th.tx; r.tinf = th.tinf;
        break;
    case SymmetryOp::SwapXY:
        r.t0 = th.tinf - C(1); r.tx = th.t1; r.t1 = th.tx; r.tinf = th.t0 + C(1);
        break;
    }
    return r;
}

// (x, y) -> (x', y') on solution graphs.
template <class C>
std::pair<C, C> applyToPoint(SymmetryOp op, const C& x, const C& y) {
    switch (op) {
    case SymmetryOp::Permute01: return {C(1) - x, C(1) - y};
    case SymmetryOp::InvertX:
        if (absAsDouble(x) == 0.0) throw DivisionByZero("applyToPoint: x = 0 under InvertX");
        return {C(1) / x, y / x};
    case SymmetryOp::SwapXY:
        if (absAsDouble(y) == 0.0) throw DivisionByZero("applyToPoint: y = 0 under SwapXY");
        return {x, x / y};
    }
    throw Error("Internal", "unknown symmetry");
}

template <class C>
MonodromyData<C> applyToTraces(SymmetryOp op, const MonodromyData<C>& m) {
    MonodromyData<C> r = m;
    switch (op) {
    case SymmetryOp::Permute01:
        r.p0 = m.p1; r.p1 = m.p0;
        r.p0x = m.px1;
        r.px1 = m.p0x;
        r.p01 = -m.p01 - m.p0x * m.px1 + m.pInf * m.px + m.p1 * m.p0;
        break;
    case SymmetryOp::InvertX:
        r.px = m.p1; r.p1 = m.px;
        r.p01 = m.p0x;
        r.px1 = m.px1;
        r.p0x = -m.p01 - m.p0x * m.px1 + m.pInf * m.px + m.p0 * m.p1;
        break;
    case SymmetryOp::SwapXY:
        r.p0 = -m.pInf; r.px = m.p1; r.p1 = m.px; r.pInf = -m.p0;
        r.p0x = -m.p0x;
        r.p01 = -m.p01;
        r.px1 = m.px1;
        break;
    }
    return r;
}

} // namespace pvi
