// Cosh-form representation of the generic power branch at x = 0 and its
// convergence domains on the universal covering.
//
//   y(x) = 1 / cosh^2( (sigma-1)/2 ln x - (1/2) ln a + ln 2 + v(x)/2 ),
//
//   v(x) = sum_{n>=1} a_n x^n
//        + sum_{n>=0, m>=1} b_nm x^n (a x^{1-sigma})^m
//        + sum_{n>=0, m>=1} c_nm x^n (a^{-1} x^sigma)^m,
//
// valid for sigma outside (-inf, 0] and [1, +inf) on the spiral domain
//
//   D(r; sigma, a):  |x| < r,  |a x^{1-sigma}| < 4r,  |a^{-1} x^sigma| < r/4,
//
// an open region in the (ln|x|, arg x) half-plane.  Points of the covering
// are always passed as (ln|x|, arg x) pairs: arg x is unbounded.
//
// The v-coefficients are obtained by inverting the power-lattice expansion
// of the same branch: with T = a x^{1-sigma},
//
//   e^w = (2 - y + 2 sqrt(1-y)) / y  (the root with e^w -> infinity),
//   e^v = (T/4) e^w  =  [ (2-y+2 sqrt(1-y))/4 ] * (T/y),
//
// so v = log of a unit graded series built from the PowerGeneric expansion,
// which itself is fixed by the vanishing of the PVI residual order by order.
// The forward composition (reconstructValueSeries) undoes the inversion and
// must reproduce the PowerGeneric series exactly; tests verify this and the
// independence of the structural coefficients from a.
//
// Path taxonomy: along  arg x = arg x0 + (Re sigma - S)/Im sigma (ln|x| -
// ln|x0|)  with 0 <= S <= 1 the moduli behave as |x^sigma| ~ |x|^S and
// |x^{1-sigma}| ~ |x|^{1-S}; S in (0,1) gives the pure power law
// a x^{1-sigma}, S = 0 the sine-oscillatory value, S = 1 the reciprocal
// oscillatory value.  In the (ln|x|, Im sigma arg x) plane those paths have
// slopes Re sigma - S, so domain boundaries (slopes Re sigma and
// Re sigma - 1) carry the oscillatory regimes and interior slopes the power
// regime.  Replacing sigma by +-sigma + 2N tiles the covering with further
// domains of the same shape.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "pvi/branches.hpp"
#include "pvi/errors.hpp"
#include "pvi/gradedseries.hpp"
#include "pvi/monodromy.hpp"
#include "pvi/parameters.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

// A point of the universal covering of the punctured disk at 0.
struct CoveringPoint {
    double lnAbs = 0.0;  // ln |x|
    double arg = 0.0;    // arg x, unbounded
};

template <class C>
C coveringLog(const CoveringPoint& p) {
    return makeComplex<C>(p.lnAbs, p.arg);
}

// ---------------------------------------------------------------------------
// Convergence domain.
// ---------------------------------------------------------------------------

// A boundary line eta = slope * ln|x| + intercept in the (ln|x|, eta) plane
// with eta = Im sigma * arg x.
struct BoundaryLine {
    double slope = 0.0;
    double intercept = 0.0;
    bool isLower = false;  // true: domain lies above this line
};

template <class C>
struct CriticalDomain {
    double r = 0.1;
    C sigma{};
    C a{};

    // Strict inequalities; boundary points are excluded.
    bool contains(const CoveringPoint& p) const {
        if (!(p.lnAbs < std::log(r))) return false;
        const double res = toDouble(realPart(sigma));
        const double ims = toDouble(imagPart(sigma));
        const double lna = std::log(absAsDouble(a));
        if (ims == 0.0) return true;  // real exponent: plain disk
        const double eta = ims * p.arg;
        const double lower = res * p.lnAbs - lna - std::log(r / 4.0);
        const double upper = (res - 1.0) * p.lnAbs - lna + std::log(4.0 * r);
        return lower < eta && eta < upper;
    }

    // The two boundary lines in the (ln|x|, Im sigma * arg x) plane.
    std::pair<BoundaryLine, BoundaryLine> etaBoundaries() const {
        const double res = toDouble(realPart(sigma));
        const double lna = std::log(absAsDouble(a));
        BoundaryLine lower{res, -lna - std::log(r / 4.0), true};
        BoundaryLine upper{res - 1.0, -lna + std::log(4.0 * r), false};
        return {lower, upper};
    }
};

// ---------------------------------------------------------------------------
// Path family.
// ---------------------------------------------------------------------------

template <class C>
struct SigmaPath {
    C sigma{};
    CoveringPoint x0{};
    double Sigma = 0.5;  // in [0, 1]

    double argAt(double lnAbs) const {
        const double ims = toDouble(imagPart(sigma));
        if (ims == 0.0)
            throw ConditionViolation("SigmaPath: Im sigma must be nonzero for a path family");
        const double res = toDouble(realPart(sigma));
        return x0.arg + (res - Sigma) / ims * (lnAbs - x0.lnAbs);
    }

    CoveringPoint pointAt(double lnAbs) const { return {lnAbs, argAt(lnAbs)}; }
};

// ---------------------------------------------------------------------------
// v-series construction.
// ---------------------------------------------------------------------------

template <class C>
struct ShimomuraBranch {
    C sigma{};
    C a{};
    Theta<C> theta;
    int order = 0;
    GradedSeries<C> v;  // keys (n', m'): x^{n'} (x^sigma)^{m'}
};

namespace detail {

// (2 - y + 2 sqrt(1-y)) / 4 as a graded series in y (unit constant term).
template <class C>
GradedSeries<C> coshNumeratorQuarter(const GradedSeries<C>& y) {
    // sqrt(1-y) = sum_k binom(1/2, k) (-y)^k
    GradedSeries<C> root(y.lambda(), y.caps());
    root.insert({0, 0, 0}, C(1));
    GradedSeries<C> pw = root;
    C binom(1);  // binom(1/2, k) * (-1)^k, updated multiplicatively
    for (int k = 1; k <= graded_detail::factorBound(y); ++k) {
        pw = pw * y;
        if (pw.empty()) break;
        // binom(1/2,k)(-1)^k = binom(1/2,k-1)(-1)^(k-1) * (k-3/2)/k
        binom *= (C(k) - C(1.5)) / C(k);
        root += pw * binom;
    }
    GradedSeries<C> num(y.lambda(), y.caps());
    num.insert({0, 0, 0}, C(2));
    num -= y;
    num += root * C(2);
    return num * C(0.25);
}

} // namespace detail

// Invert the PowerGeneric expansion into the cosh-form correction v.
template <class C>
ShimomuraBranch<C> vCoefficients(const C& sigma, const C& a, const Theta<C>& theta, int order) {
    ShimomuraBranch<C> out;
    out.sigma = sigma;
    out.a = a;
    out.theta = theta;
    out.order = order;

    auto pg = expandBranch(ClassTag::PowerGeneric,
                           std::map<std::string, C>{{"sigma", sigma}, {"a", a}}, theta, order);
    GradedCaps caps{order, std::max(2 * order + 4, 16), 0};
    GradedSeries<C> y = withCaps(pg.series, caps);

    // u = y / T - 1, T = a x^{1-sigma}: shift keys by (n-1, m+1), scale 1/a.
    GradedSeries<C> u = y.shifted({-1, 1, 0}, C(1) / a);
    u.mutableTerms().erase(GradedKey{0, 0, 0});

    // e^v = [(2 - y + 2 sqrt(1-y))/4] * (1 + u)^{-1}
    GradedSeries<C> onePlusU(y.lambda(), caps);
    onePlusU.insert({0, 0, 0}, C(1));
    onePlusU += u;
    GradedSeries<C> ev = detail::coshNumeratorQuarter(y) * gradedInverseUnit(onePlusU);
    out.v = gradedLogUnit(ev);
    out.v.prune(1e-3 * toDouble(ScalarTraits<C>::epsilon()));
    return out;
}

// Structural coefficient tables.  In the key (n', m') of v,
//   m' = 0          ->  a_{n'}                      (pure-x sum),
//   m' = +m (m>=1)  ->  c_{n', m}  = coeff * a^{ m} (x^n (a^{-1} x^sigma)^m),
//   m' = -m (m>=1)  ->  b_{n'-m,m} = coeff * a^{-m} (x^n (a x^{1-sigma})^m).
template <class C>
std::map<int, C> pureCoefficients(const ShimomuraBranch<C>& b) {
    std::map<int, C> r;
    for (const auto& [k, c] : b.v.terms())
        if (k.m == 0) r[k.n] = c;
    return r;
}

template <class C>
std::map<std::pair<int, int>, C> bCoefficients(const ShimomuraBranch<C>& b) {
    using std::pow;
    std::map<std::pair<int, int>, C> r;
    for (const auto& [k, c] : b.v.terms())
        if (k.m < 0) {
            const int m = -k.m;
            C scale(1);
            for (int i = 0; i < m; ++i) scale /= b.a;
            r[{k.n - m, m}] = c * scale;
        }
    return r;
}

template <class C>
std::map<std::pair<int, int>, C> cCoefficients(const ShimomuraBranch<C>& b) {
    std::map<std::pair<int, int>, C> r;
    for (const auto& [k, c] : b.v.terms())
        if (k.m > 0) {
            C scale(1);
            for (int i = 0; i < k.m; ++i) scale *= b.a;
            r[{k.n, k.m}] = c * scale;
        }
    return r;
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

// Overflow-safe 1/cosh^2(w/2): with E = exp(-|Re|-signed w),
// 1/cosh^2(w/2) = 4E/(1+E)^2 for either sign choice, and |E| <= 1 keeps the
// exponential bounded (this is the re-expression that replaces a raw cosh).
template <class C>
C sechSquaredHalf(const C& w) {
    using std::exp;
    const C e = (toDouble(realPart(w)) >= 0.0) ? C(exp(-w)) : C(exp(w));
    const C denom = C(1) + e;
    if (absAsDouble(denom) < 1e-14)
        throw DenominatorNearZero("cosh-form denominator vanishes (pole of the branch)");
    return C(4) * e / (denom * denom);
}

template <class C>
C shimomuraValueUnchecked(const C& sigma, const C& a, const GradedSeries<C>& v,
                          const CoveringPoint& p) {
    using std::log;
    const C L = coveringLog<C>(p);
    const C w = (sigma - C(1)) * L - log(a) + C(2) * log(makeComplex<C>(2.0)) + v.evaluate(L);
    return sechSquaredHalf(w);
}

template <class C>
C shimomuraValue(const C& sigma, const C& a, const GradedSeries<C>& v, const CoveringPoint& p,
                 double r = 0.1) {
    const double rs = toDouble(realPart(sigma));
    const double is = toDouble(imagPart(sigma));
    if (is == 0.0 && (rs <= 0.0 || rs >= 1.0))
        throw ConditionViolation("shimomuraValue: sigma must avoid (-inf,0] and [1,+inf)");
    CriticalDomain<C> dom{r, sigma, a};
    if (!dom.contains(p))
        throw OutsideDomain("shimomuraValue: point is outside the convergence domain");
    return shimomuraValueUnchecked(sigma, a, v, p);
}

template <class C>
C shimomuraValue(const ShimomuraBranch<C>& b, const CoveringPoint& p, double r = 0.1) {
    return shimomuraValue(b.sigma, b.a, b.v, p, r);
}

// Forward composition: rebuild the y-series from v.  With E = (T/4) e^{-v},
// y = 4E / (1+E)^2 as a graded series; must reproduce PowerGeneric.
template <class C>
GradedSeries<C> reconstructValueSeries(const ShimomuraBranch<C>& b) {
    GradedSeries<C> expMinusV = gradedExp(-b.v);
    // multiply by T/4 = (a/4) x^{1,-1}
    GradedSeries<C> E = expMinusV.shifted({1, -1, 0}, b.a / C(4));
    GradedSeries<C> onePlusE(E.lambda(), E.caps());
    onePlusE.insert({0, 0, 0}, C(1));
    onePlusE += E;
    GradedSeries<C> inv = gradedInverseUnit(onePlusE);
    return E * inv * inv * C(4);
}

// ---------------------------------------------------------------------------
// Domain tiling and approach classification.
// ---------------------------------------------------------------------------

template <class C>
C tileExponent(const C& sigma, int N, int sign) {
    return C(sign >= 0 ? 1.0 : -1.0) * sigma + C(2.0 * N);
}

// Companion constant for the opposite exponent sign: a(sigma) a(-sigma) is
// fixed by the amplitude relation, so a(-sigma) = product / a(sigma).
template <class C>
C aOppositeSign(const Theta<C>& theta, const C& sigma, const C& a) {
    return aSigmaProduct(theta.t0, theta.tx, sigma) / a;
}

// D(r; sigma_N^{sign}, aTile) with sigma_N^{sign} = sign*sigma + 2N.  The
// integration constant of a tile other than (N=0, +) is an independent datum
// of the branch (a connection problem outside this library's scope), so it
// is passed explicitly; use aOppositeSign for the (N=0, -) tile.
template <class C>
CriticalDomain<C> domainForN(const C& sigma, const C& aTile, int N, int sign, double r = 0.1) {
    const C s = tileExponent(sigma, N, sign);
    const double rs = toDouble(realPart(s));
    const double is = toDouble(imagPart(s));
    if (is == 0.0 && (rs <= 0.0 || rs >= 1.0))
        throw ConditionViolation("domainForN: tile exponent lies in the excluded real rays");
    if (absAsDouble(aTile) < 1e-300)
        throw ConditionViolation("domainForN: tile constant must be nonzero");
    return CriticalDomain<C>{r, s, aTile};
}

// The strip separating two domains in the common (ln|x|, Im sigma * arg x)
// plane of the first domain's sigma.  For the (N=0, +-) pair the strip is
// bounded by parallel lines of slope Re sigma.
template <class C>
struct SeparatingStrip {
    BoundaryLine below;  // upper boundary of the lower domain
    BoundaryLine above;  // lower boundary of the upper domain
};

template <class C>
SeparatingStrip<C> separatingStrip(const CriticalDomain<C>& lower, const CriticalDomain<C>& upper) {
    // Express both domains' boundaries in the eta-plane of lower.sigma.
    const double imLow = toDouble(imagPart(lower.sigma));
    const double imUp = toDouble(imagPart(upper.sigma));
    if (imLow == 0.0 || imUp == 0.0)
        throw ConditionViolation("separatingStrip: real exponents have no strip structure");
    auto [lowLower, lowUpper] = lower.etaBoundaries();
    auto [upLower, upUpper] = upper.etaBoundaries();
    const double scale = imLow / imUp;  // eta_lower-plane = scale * eta_upper-plane
    BoundaryLine upLowerScaled{upLower.slope * scale, upLower.intercept * scale, scale > 0};
    BoundaryLine upUpperScaled{upUpper.slope * scale, upUpper.intercept * scale, scale < 0};
    // The strip sits between the uppermost boundary of the domain that lies
    // below and the lowermost boundary of the domain that lies above.
    SeparatingStrip<C> s;
    s.below = lowUpper;
    s.above = upLowerScaled.isLower ? upLowerScaled : upUpperScaled;
    return s;
}

enum class ApproachKind { Oscillatory, InverseOscillatory, Power };

inline const char* approachKindName(ApproachKind k) {
    switch (k) {
        case ApproachKind::Oscillatory: return "oscillatory";
        case ApproachKind::InverseOscillatory: return "inverse-oscillatory";
        case ApproachKind::Power: return "power";
    }
    return "?";
}

struct ApproachClass {
    ApproachKind kind = ApproachKind::Power;
    int N = 0;        // tile index of the matched line (0 for Power)
    int sign = 0;     // tile sign of the matched line (0 for Power)
    bool poleLine = false;  // slope lies on Re sigma + 2l - 1 for some integer l
};

// Classify a path by its slope in the (ln|x|, Im sigma * arg x) plane:
// slope Re(sigma_N^s)     -> oscillatory value on that tile,
// slope Re(sigma_N^s) - 1 -> reciprocal-oscillatory value (potential pole
//                            line: these are exactly Re sigma + 2l - 1 up to
//                            the sign choice),
// anything else           -> power law a x^{1-sigma} of the ambient tile.
template <class C>
ApproachClass classifyApproach(double slope, const C& sigma, double tol = 1e-9,
                               int maxN = 64) {
    const double rs = toDouble(realPart(sigma));
    ApproachClass out;
    for (int N = -maxN; N <= maxN; ++N) {
        for (int sign : {+1, -1}) {
            const double base = (sign > 0 ? rs : -rs) + 2.0 * N;
            if (std::abs(slope - base) < tol) {
                out.kind = ApproachKind::Oscillatory;
                out.N = N;
                out.sign = sign;
                return out;
            }
            if (std::abs(slope - (base - 1.0)) < tol) {
                out.kind = ApproachKind::InverseOscillatory;
                out.N = N;
                out.sign = sign;
                out.poleLine = true;
                return out;
            }
        }
    }
    return out;
}

} // namespace pvi
