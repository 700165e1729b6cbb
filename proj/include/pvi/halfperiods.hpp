// Half-periods of the elliptic representation.
//
// omega1(x) = (pi/2) F(x) and omega2(x) = i (pi/2) F(1-x), where
// F(x) = 2F1(1/2, 1/2; 1; x) is the complete-elliptic-integral
// hypergeometric function (DLMF 19.5.8: K(k) = (pi/2) F(k^2)).
//
// F is computed from its power series when the argument is small and from
// the logarithmic connection formula
//
//   F(1-w) = -(1/pi) [ ln(w/16) F(w) + Htilde(w) ],
//   Htilde(w) = sum_{n>=1} kappa_n h_n w^n,
//   kappa_n = ((1/2)_n / n!)^2,
//   h_n = sum_{j=1}^n ( 4/(2j-1) - 2/j )        (h_n = ln 16 - e_n, rational),
//
// when the argument is close to 1 (DLMF 15.8.10 specialised to a = b = 1/2,
// c = 1, where the digamma combination telescopes to the rational h_n).
// Both routes use the principal logarithm; the branch cut of F sits on
// [1, infinity).
//
// An independent oracle omega1 = pi / (2 AGM(1, sqrt(1-x))) based on the
// arithmetic-geometric mean (DLMF 19.8.5) is provided for cross-validation;
// it shares no code with the series routes.

#pragma once

#include <cstdlib>

#include "pvi/errors.hpp"
#include "pvi/formal.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

template <class C>
struct HalfPeriods {
    C omega1;
    C omega2;
};

namespace detail {

// Power series of F at 0, summed until the terms fall below the working
// epsilon.  Requires |z| comfortably below 1.
template <class C>
C hypHalfSeries(const C& z) {
    using R = RealOf<C>;
    const R eps = ScalarTraits<C>::epsilon();
    C sum = makeComplex<C>(1.0);
    C term = makeComplex<C>(1.0);
    for (int n = 1; n <= 4000; ++n) {
        const R ratio = (R(2 * n - 1) / R(2 * n)) * (R(2 * n - 1) / R(2 * n));
        term *= z * C(ratio);
        sum += term;
        using std::abs;
        if (abs(term) < eps * (abs(sum) + R(1))) return sum;
    }
    throw NoConvergence("hypergeometric series did not converge");
}

// F(w) and Htilde(w) evaluated together by one loop (they share the
// kappa_n factors).  Requires |w| comfortably below 1.
template <class C>
struct HypPair {
    C f;     // F(w)
    C tail;  // Htilde(w)
};

template <class C>
HypPair<C> hypPairSeries(const C& w) {
    using R = RealOf<C>;
    const R eps = ScalarTraits<C>::epsilon();
    C f = makeComplex<C>(1.0);      // F(w)
    C tail = makeComplex<C>(0.0);   // Htilde(w)
    C kappa = makeComplex<C>(1.0);
    C power = makeComplex<C>(1.0);
    R h = R(0);
    for (int n = 1; n <= 4000; ++n) {
        const R ratio = (R(2 * n - 1) / R(2 * n)) * (R(2 * n - 1) / R(2 * n));
        kappa *= C(ratio);
        power *= w;
        h += R(4) / R(2 * n - 1) - R(2) / R(n);
        const C ft = kappa * power;
        f += ft;
        tail += ft * C(h);
        using std::abs;
        if (abs(ft) * (abs(C(h)) + R(1)) < eps * (abs(f) + R(1))) return {f, tail};
    }
    throw NoConvergence("hypergeometric connection series did not converge");
}

// F(1-w) for small |w| through the logarithmic connection formula.
template <class C>
C hypHalfNearOne(const C& w) {
    const HypPair<C> p = hypPairSeries(w);
    using std::log;
    const C lnArg = log(w) - log(makeComplex<C>(16.0));
    return -(lnArg * p.f + p.tail) / piC<C>();
}

} // namespace detail

// F(1/2, 1/2; 1; x).  Chooses the expansion point (0 or 1) closer to x.
template <class C>
C hypergeometricHalf(const C& x) {
    using std::abs;
    const double ax = absAsDouble(x);
    const double aw = absAsDouble(C(makeComplex<C>(1.0) - x));
    if (aw < 1e-12) {
        throw NearSingularity("argument within 1e-12 of the logarithmic singularity at 1");
    }
    if (ax <= 0.5) return detail::hypHalfSeries(x);
    if (aw <= 0.5) return detail::hypHalfNearOne(makeComplex<C>(1.0) - x);
    // Neither expansion point is comfortably close; use the nearer one while
    // the series still converges at a useful rate.
    if (ax <= aw && ax < 0.98) return detail::hypHalfSeries(x);
    if (aw < 0.98) return detail::hypHalfNearOne(makeComplex<C>(1.0) - x);
    throw OutsideDomain("argument too far from both expansion points of F");
}

// omega1(x) = (pi/2) F(x),  omega2(x) = i (pi/2) F(1-x).
// omega2(1-x) = i * omega1(x) holds exactly by construction.
template <class C>
HalfPeriods<C> halfPeriods(const C& x) {
    if (absAsDouble(x) < 1e-12) {
        throw NearSingularity("second half-period diverges logarithmically at x = 0");
    }
    if (absAsDouble(C(makeComplex<C>(1.0) - x)) < 1e-12) {
        throw NearSingularity("first half-period diverges logarithmically at x = 1");
    }
    const C half = piC<C>() / C(makeComplex<C>(2.0));
    HalfPeriods<C> hp;
    hp.omega1 = half * hypergeometricHalf(x);
    hp.omega2 = makeComplex<C>(0.0, 1.0) * half * hypergeometricHalf(C(makeComplex<C>(1.0) - x));
    return hp;
}

// Half-periods on the universal covering of the punctured disc: the position
// is given as L = ln x (arg unrestricted), and the second period uses the
// connection formula with that explicit logarithm,
//   omega2 = -(i/2) [ (L - ln 16) F(x) + Htilde(x) ],   x = e^L,
// so that continuing L -> L + 2 pi i shifts omega2 by pi F(x) = 2 omega1
// (the period relabeling that accompanies one loop around 0).
// Requires |x| <= 1/2 so that the series at 0 converge.
template <class C>
HalfPeriods<C> halfPeriodsCovering(const C& L) {
    using std::exp;
    const C x = exp(L);
    if (absAsDouble(x) > 0.5)
        throw OutsideDomain("halfPeriodsCovering requires |x| <= 1/2");
    const detail::HypPair<C> p = detail::hypPairSeries(x);
    const C half = piC<C>() / C(makeComplex<C>(2.0));
    using std::log;
    HalfPeriods<C> hp;
    hp.omega1 = half * p.f;
    hp.omega2 = makeComplex<C>(0.0, -0.5) * ((L - log(makeComplex<C>(16.0))) * p.f + p.tail);
    return hp;
}

// Independent oracle: omega1(x) = pi / (2 AGM(1, sqrt(1-x))).
// The geometric-mean branch is chosen so that |a - b| <= |a + b| at each
// step (the "right" AGM branch that keeps the iteration convergent for
// complex arguments).
template <class C>
C agmHalfPeriod(const C& x) {
    using std::abs;
    using std::sqrt;
    using R = RealOf<C>;
    const R eps = ScalarTraits<C>::epsilon();
    C a = makeComplex<C>(1.0);
    C b = sqrt(C(makeComplex<C>(1.0) - x));
    if (absAsDouble(b) < 1e-150) {
        throw NearSingularity("AGM collapses at x = 1");
    }
    for (int it = 0; it < 200; ++it) {
        const C an = (a + b) / C(makeComplex<C>(2.0));
        C bn = sqrt(a * b);
        if (abs(an - bn) > abs(an + bn)) bn = -bn;
        a = an;
        b = bn;
        if (abs(a - b) <= R(8) * eps * abs(a)) {
            return piC<C>() / (C(makeComplex<C>(2.0)) * a);
        }
    }
    throw NoConvergence("AGM iteration did not converge");
}

// Series data used by the elliptic-representation module:
//   hypergeometricSeries: coefficients kappa_n of F,
//   hypergeometricLogTail: coefficients kappa_n h_n of Htilde,
//   nomeLogCorrection: W = Htilde / F, so that the period ratio satisfies
//     i pi tau(x) = ln(x/16) + W(x),  W(0) = 0.
template <class C>
PowerSeries<C> hypergeometricSeries(int order) {
    using R = RealOf<C>;
    PowerSeries<C> c(order);
    C kappa = makeComplex<C>(1.0);
    c[0] = kappa;
    for (int n = 1; n <= order; ++n) {
        kappa *= C((R(2 * n - 1) / R(2 * n)) * (R(2 * n - 1) / R(2 * n)));
        c[n] = kappa;
    }
    return c;
}

template <class C>
PowerSeries<C> hypergeometricLogTail(int order) {
    using R = RealOf<C>;
    PowerSeries<C> c(order);
    C kappa = makeComplex<C>(1.0);
    R h = R(0);
    for (int n = 1; n <= order; ++n) {
        kappa *= C((R(2 * n - 1) / R(2 * n)) * (R(2 * n - 1) / R(2 * n)));
        h += R(4) / R(2 * n - 1) - R(2) / R(n);
        c[n] = kappa * C(h);
    }
    return c;
}

template <class C>
PowerSeries<C> nomeLogCorrection(int order) {
    return hypergeometricLogTail<C>(order) * reciprocal(hypergeometricSeries<C>(order));
}

} // namespace pvi
