// Elliptic representation of the critical behavior at x = 0:
//
//   y(x) = P(nu1 omega1(x) + nu2 omega2(x) + v(x); omega1, omega2) + (1+x)/3,
//
// where P is the Weierstrass function of the half-periods
// omega1 = (pi/2) F(x), omega2 = i (pi/2) F(1-x), and v is a correction
// series on the graded lattice x^(n + m nu2).  The exponent dictionary to the
// power-lattice representation is sigma = 1 - nu2, and the leading amplitude
// is pinned by
//
//   a = -4 e^{i pi nu1} 16^{-nu2},
//
// so for matching constants the elliptic value agrees with the power-lattice
// and Shimomura evaluations on overlapping domains.
//
// The correction series v is determined by matching: composing the q-series
// of P with u = nu1 omega1 + nu2 omega2 + v turns y into a graded series in
// (x, x^{nu2}), and v is solved (Newton iteration on its coefficients, one
// dense linear solve per step) so that this composition equals the
// power-lattice series with sigma = 1 - nu2 term by term.  That series is the
// unique one annihilating the equation's residual order by order, so the
// matched v makes the elliptic representation solve the equation to the same
// order.  All x^{nu2} branches live on the universal covering: positions are
// (ln|x|, arg x) pairs and no principal-branch choice is ever taken.
//
// Composition layout (everything strictly graded, i.e. supported on keys
// (n, m) with n >= 0 and m >= 1 when n = 0):  with L = ln x, W the nome
// correction (i pi tau = ln(x/16) + W(x)) and F the half-period series,
//
//   V     = pi u / (2 omega1),
//   E     = e^{2iV} = kappa x^{nu2} e^{nu2 W} e^{g},  kappa = e^{i pi nu1} 16^{-nu2},
//   g     = 2 i v / F,
//   q^2   = (x^2/256) e^{2W},
//   P-sum = -1/3 + sin^{-2} V + sum_{n>=1} 8n (q^{2n} - (P_+^n + P_-^n)/2) / (1 - q^{2n}),
//   P_+   = q^2 E,  P_- = q^2 / E        (both have x-level >= 2),
//   sin^{-2} V = -4E / (1-E)^2,
//   y     = P-sum / F^2 + (1+x)/3.
//
// P_- is always formed as exp((2-nu2)W - g) shifted by x^2 / (256 kappa);
// the factor 1/E never appears alone (it would carry negative grading).

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pvi/branches.hpp"
#include "pvi/errors.hpp"
#include "pvi/formal.hpp"
#include "pvi/gradedseries.hpp"
#include "pvi/halfperiods.hpp"
#include "pvi/linsolve.hpp"
#include "pvi/monodromy.hpp"
#include "pvi/scalar.hpp"
#include "pvi/shimomura.hpp"
#include "pvi/weierstrass.hpp"

namespace pvi {

// ---------------------------------------------------------------------------
// Parameter dictionary.
// ---------------------------------------------------------------------------

// 2 cos(pi nu2) = -p0x, sharing the normalization of sigmaFromTrace through
// nu2 = 1 - sigma (the two trace relations differ by exactly that flip).
template <class C>
C nu2FromTrace(const C& p0x) {
    return C(makeComplex<C>(1.0)) - sigmaFromTrace(p0x).sigma;
}

// kappa = e^{i pi nu1} 16^{-nu2}; the leading amplitude of the matching
// power-lattice branch is a = -4 kappa.
template <class C>
C ellipticKappa(const C& nu1, const C& nu2) {
    using std::exp;
    using std::log;
    const C i = makeComplex<C>(0.0, 1.0);
    return exp(i * piC<C>() * nu1 - nu2 * log(makeComplex<C>(16.0)));
}

template <class C>
C aDictionary(const C& nu1, const C& nu2) {
    return C(makeComplex<C>(-4.0)) * ellipticKappa(nu1, nu2);
}

// Label changes that leave the represented transcendent fixed: adding a full
// period to the nu2 leg, and the parity flip of the P function.  They move
// the representation to a different domain / power tile.
template <class C>
std::pair<C, C> periodRelabel(const C& nu1, const C& nu2, int shift) {
    return {nu1, nu2 + C(makeComplex<C>(2.0 * shift))};
}

template <class C>
std::pair<C, C> parityRelabel(const C& nu1, const C& nu2) {
    return {-nu1, C(makeComplex<C>(2.0)) - nu2};
}

// ---------------------------------------------------------------------------
// Convergence domain.
// ---------------------------------------------------------------------------

// D(r; nu1, nu2) = { |x| < r,  |e^{-i pi nu1} (x/16)^{1-nu2}| < r,
//                             |e^{+i pi nu1} (x/16)^{nu2}|   < r } on the
// covering.  For real parameters the two amplitude conditions lose their
// arg-x dependence and the domain is the punctured disc D0(r).
template <class C>
struct EllipticDomain {
    double r = 0.1;
    C nu1{};
    C nu2{};

    bool contains(const CoveringPoint& p) const {
        const double lnr = std::log(r);
        if (!(p.lnAbs < lnr)) return false;
        const double imNu1 = toDouble(imagPart(nu1));
        const double reNu2 = toDouble(realPart(nu2));
        const double imNu2 = toDouble(imagPart(nu2));
        if (imNu2 == 0.0 && imNu1 == 0.0) return true;  // D0(r)
        const double pi = piValue<Complex64>();
        const double ln16 = std::log(16.0);
        const double e1 =
            pi * imNu1 + (reNu2 - 1.0) * ln16 + (1.0 - reNu2) * p.lnAbs + imNu2 * p.arg;
        const double e2 = -pi * imNu1 - reNu2 * ln16 + reNu2 * p.lnAbs - imNu2 * p.arg;
        return e1 < lnr && e2 < lnr;
    }
};

// ---------------------------------------------------------------------------
// The branch object.
// ---------------------------------------------------------------------------

template <class C>
struct EllipticBranch {
    C nu1{};
    C nu2{};
    Theta<C> theta;
    int order = 0;
    GradedSeries<C> v;          // lambda = nu2; strictly graded
    C aDict{};                  // -4 e^{i pi nu1} 16^{-nu2}
    double r = 0.1;             // working domain radius
    double matchResidual = 0.0; // worst coefficient mismatch over the window
    int newtonIterations = 0;

    C sigma() const { return C(makeComplex<C>(1.0)) - nu2; }
};

namespace detail {

// One evaluation of the composed series: given the current v (through
// g = 2 i v / F), produce the graded y-series and the derivative kernel
// d y / d g (whose key-shifts are the Newton matrix columns).
template <class C>
struct EllipticComposition {
    GradedSeries<C> y;
    GradedSeries<C> dyByDg;  // multiply by 2i/F to get d y / d v
};

template <class C>
EllipticComposition<C> composeElliptic(const GradedSeries<C>& g, const C& nu2, const C& kappa,
                                       const GradedSeries<C>& wSeries,
                                       const GradedSeries<C>& invF2) {
    const GradedCaps caps = g.caps();
    const C one = makeComplex<C>(1.0);
    const C half = one / C(makeComplex<C>(2.0));
    const C c256 = makeComplex<C>(256.0);
    const GradedSeries<C> unitOne = GradedSeries<C>::monomial(nu2, caps, {0, 0, 0}, one);

    // E = kappa x^{nu2} exp(nu2 W + g); P- = (x^2/(256 kappa)) exp((2-nu2) W - g).
    const GradedSeries<C> expPos = gradedExp(GradedSeries<C>(wSeries * nu2 + g));
    const GradedSeries<C> expNeg =
        gradedExp(GradedSeries<C>(wSeries * (C(makeComplex<C>(2.0)) - nu2) - g));
    const GradedSeries<C> e = expPos.shifted({0, 1, 0}, kappa);
    const GradedSeries<C> pMinus = expNeg.shifted({2, -1, 0}, one / (c256 * kappa));
    const GradedSeries<C> q2 =
        gradedExp(GradedSeries<C>(wSeries * C(makeComplex<C>(2.0)))).shifted({2, 0, 0}, one / c256);
    const GradedSeries<C> pPlus = q2 * e;

    // sin^{-2} V = -4E/(1-E)^2 and its g-derivative -4E(1+E)/(1-E)^3.
    const GradedSeries<C> invOneMinusE = gradedInverseUnit(GradedSeries<C>(unitOne - e));
    const GradedSeries<C> inv2 = invOneMinusE * invOneMinusE;
    const GradedSeries<C> minusFourE = e * C(makeComplex<C>(-4.0));
    GradedSeries<C> u = minusFourE * inv2;
    GradedSeries<C> du = minusFourE * (GradedSeries<C>(unitOne + e) * (inv2 * invOneMinusE));

    // Lattice tail: sum over n of 8n (q^{2n} - (P+^n + P-^n)/2) / (1 - q^{2n});
    // every factor has x-level >= 2n, so the loop is short.
    GradedSeries<C> pPlusPow = pPlus;
    GradedSeries<C> pMinusPow = pMinus;
    GradedSeries<C> q2Pow = q2;
    for (int n = 1; n <= caps.maxN + 2; ++n) {
        if (pPlusPow.empty() && pMinusPow.empty() && q2Pow.empty()) break;
        const C w8 = makeComplex<C>(8.0 * n);
        const C w8n = makeComplex<C>(8.0 * n * n);
        GradedSeries<C> num = q2Pow - (pPlusPow + pMinusPow) * half;
        GradedSeries<C> dnum = (pPlusPow - pMinusPow) * half;
        if (!q2Pow.empty()) {
            const GradedSeries<C> invDen =
                gradedInverseUnit(GradedSeries<C>(unitOne - q2Pow));
            num = num * invDen;
            dnum = dnum * invDen;
        }
        u += num * w8;
        du -= dnum * w8n;
        pPlusPow = pPlusPow * pPlus;
        pMinusPow = pMinusPow * pMinus;
        q2Pow = q2Pow * q2;
    }

    u -= unitOne * (one / C(makeComplex<C>(3.0)));

    EllipticComposition<C> out;
    out.y = u * invF2;
    // (1 + x)/3 additive shift, kept out of v by design.
    out.y.insert({0, 0, 0}, one / C(makeComplex<C>(3.0)));
    out.y.insert({1, 0, 0}, one / C(makeComplex<C>(3.0)));
    out.dyByDg = du * invF2;
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Correction series by Newton matching.
// ---------------------------------------------------------------------------

// Solve for the strictly graded v (keys n <= order, |m| <= order) such that
// the composed elliptic series equals the power-lattice branch with
// sigma = 1 - nu2 and a = -4 e^{i pi nu1} 16^{-nu2}.  The structural
// coefficients v_{nm} kappa^{-m} are rational in nu2 and independent of nu1.
template <class C>
EllipticBranch<C> vEllipticCoefficients(const C& nu1, const C& nu2, const Theta<C>& theta,
                                        int order) {
    if (order < 1) throw ConditionViolation("vEllipticCoefficients: order must be >= 1");
    const double reNu2 = toDouble(realPart(nu2));
    if (reNu2 <= 0.0 || reNu2 > 1.0)
        throw ConditionViolation("vEllipticCoefficients: Re nu2 must lie in (0, 1]");

    const C sigma = C(makeComplex<C>(1.0)) - nu2;
    const C kappa = ellipticKappa(nu1, nu2);
    const C aDict = C(makeComplex<C>(-4.0)) * kappa;

    // Target: power-lattice series, relabeled x^{n + m sigma} ->
    // x^{(n+m) - m nu2}, cropped to the matching window.
    const GradedCaps caps{order, 2 * order + 6, 0};
    BranchExpansion<C> pg = expandBranch(
        ClassTag::PowerGeneric, {{"sigma", sigma}, {"a", aDict}}, theta, 2 * order);
    GradedSeries<C> target(nu2, caps);
    for (const auto& [k, c] : pg.series.terms()) {
        if (std::abs(k.m) > order) continue;
        target.insert({k.n + k.m, -k.m, 0}, c);
    }

    // Shared x-only ingredients.
    const PowerSeries<C> fPow = hypergeometricSeries<C>(order);
    const PowerSeries<C> invFPow = reciprocal(fPow);
    const PowerSeries<C> invF2Pow = invFPow * invFPow;
    const PowerSeries<C> wPow = nomeLogCorrection<C>(order);
    auto lift = [&](const PowerSeries<C>& p) {
        GradedSeries<C> s(nu2, caps);
        for (int k = 0; k <= p.order(); ++k)
            if (absAsDouble(p[k]) != 0.0) s.insert({k, 0, 0}, p[k]);
        return s;
    };
    const GradedSeries<C> wSeries = lift(wPow);
    const GradedSeries<C> invF2 = lift(invF2Pow);
    const GradedSeries<C> twoIinvF = lift(invFPow) * makeComplex<C>(0.0, 2.0);

    // Unknown keys: the strict window.
    std::vector<GradedKey> keys;
    for (int n = 0; n <= order; ++n)
        for (int m = (n == 0 ? 1 : -n); m <= order; ++m) {
            if (n == 0 && m < 1) continue;
            keys.push_back({n, m, 0});
        }
    const int nk = static_cast<int>(keys.size());

    const double eps = toDouble(ScalarTraits<C>::epsilon());
    const double scale = std::max(1.0, maxAbsCoeff(target));
    const double tol = 32.0 * eps * scale;

    GradedSeries<C> v(nu2, caps);
    detail::EllipticComposition<C> comp;
    double worstRow = 0.0;
    double prevWorst = std::numeric_limits<double>::infinity();
    int iterations = 0;
    for (int it = 0; it < 30; ++it) {
        const GradedSeries<C> g = twoIinvF * v;
        graded_detail::requireStrict(g, "elliptic correction argument");
        comp = detail::composeElliptic(g, nu2, kappa, wSeries, invF2);
        const GradedSeries<C> resid = comp.y - target;

        std::vector<C> rhs(nk);
        worstRow = 0.0;
        for (int r = 0; r < nk; ++r) {
            const C val = resid.coefficient({keys[r].n, keys[r].m + 1, 0});
            rhs[r] = -val;
            worstRow = std::max(worstRow, absAsDouble(val));
        }
        iterations = it;
        if (worstRow <= tol) break;
        // Quadratic progress has flattened out: we are at the roundoff floor.
        if (it >= 3 && worstRow >= 0.5 * prevWorst) {
            if (worstRow <= 1e6 * eps * scale) break;
            throw NoConvergence("vEllipticCoefficients: Newton matching stalled at residual " +
                                std::to_string(worstRow));
        }
        prevWorst = worstRow;
        if (it == 29)
            throw NoConvergence("vEllipticCoefficients: Newton matching did not converge");

        const GradedSeries<C> jBase = comp.dyByDg * twoIinvF;
        std::vector<std::vector<C>> mat(nk, std::vector<C>(nk, C(0)));
        for (int r = 0; r < nk; ++r)
            for (int c = 0; c < nk; ++c)
                mat[r][c] = jBase.coefficient(
                    {keys[r].n - keys[c].n, keys[r].m + 1 - keys[c].m, 0});
        LinearSolveResult<C> sol = solveDense(std::move(mat), std::move(rhs), 1e-11,
                                              "elliptic matching system");
        for (int c = 0; c < nk; ++c) v.insert(keys[c], sol.x[c]);
    }

    // Verify the full window, not only the solved rows: everything with
    // n <= order and |m| <= order + 1 must match (rows not reachable from an
    // unknown key must vanish automatically if the representation is exact).
    double worst = 0.0;
    const GradedSeries<C> resid = comp.y - target;
    for (const auto& [k, c] : resid.terms()) {
        if (k.n > order || std::abs(k.m) > order + 1) continue;
        if (k.n == 0 && k.m == 1) continue;  // pinned by the amplitude dictionary
        worst = std::max(worst, absAsDouble(c));
    }

    EllipticBranch<C> b;
    b.nu1 = nu1;
    b.nu2 = nu2;
    b.theta = theta;
    b.order = order;
    b.v = v;
    b.v.prune(1e-3 * eps);
    b.aDict = aDict;
    b.matchResidual = worst;
    b.newtonIterations = iterations;
    return b;
}

// Structural part of a correction coefficient: v_{nm} kappa^{-m}, which is
// rational in nu2 and independent of nu1.
template <class C>
C structuralCoefficient(const EllipticBranch<C>& b, GradedKey k) {
    const C kappa = ellipticKappa(b.nu1, b.nu2);
    C scalePow = makeComplex<C>(1.0);
    const C base = k.m >= 0 ? C(makeComplex<C>(1.0)) / kappa : kappa;
    for (int j = 0; j < std::abs(k.m); ++j) scalePow *= base;
    return b.v.coefficient(k) * scalePow;
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

// u(x) = nu1 omega1 + nu2 omega2 + v at a covering position.
template <class C>
C ellipticArgument(const EllipticBranch<C>& b, const CoveringPoint& p) {
    const C L = coveringLog<C>(p);
    const HalfPeriods<C> hp = halfPeriodsCovering(L);
    return b.nu1 * hp.omega1 + b.nu2 * hp.omega2 + b.v.evaluate(L);
}

template <class C>
C ellipticValueUnchecked(const EllipticBranch<C>& b, const CoveringPoint& p) {
    using std::exp;
    const C L = coveringLog<C>(p);
    const HalfPeriods<C> hp = halfPeriodsCovering(L);
    const C u = b.nu1 * hp.omega1 + b.nu2 * hp.omega2 + b.v.evaluate(L);
    const Lattice<C> lat{hp.omega1, hp.omega2};
    const C x = exp(L);
    return weierstrassP(u, lat) + (C(makeComplex<C>(1.0)) + x) / C(makeComplex<C>(3.0));
}

template <class C>
C ellipticValue(const EllipticBranch<C>& b, const CoveringPoint& p) {
    EllipticDomain<C> dom;
    dom.r = b.r;
    dom.nu1 = b.nu1;
    dom.nu2 = b.nu2;
    if (!dom.contains(p))
        throw OutsideDomain("ellipticValue: point is outside the convergence domain");
    return ellipticValueUnchecked(b, p);
}

} // namespace pvi
