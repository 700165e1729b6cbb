// Asymptotic pole lattices near x = 0 for the inverse-oscillatory branches.
//
// Those branches have 1/y = sum_{n>=1} x^{n-1} y_n(x) with oscillatory rows
//
//   y_n(x) = sum_{m=-n}^{n} A_nm e^{i m phi} x^{2 i m nu},
//
// and the level-1 row A sin(2 nu ln x + phi) + B vanishes on two geometric
// sequences of points accumulating at 0,
//
//   x_k(j) = exp{ -phi/(2 nu) - (i/(2 nu)) ln Z_j - k pi/nu },   j = 1, 2,
//
// where Z_1, Z_2 are the roots of A11 Z^2 + A10 Z + A_{1,-1}, with principal
// branches fixed (other choices shuffle k).  The labels are pinned so that
// j = 1 carries +sqrt on the principal radical: in the reference case below
// this makes the j = 2 sequence the one of smaller modulus at fixed k and
// reproduces the tabulated correction coefficients.  Near each x_k(j) the
// full transcendent has exactly one pole
//
//   xi_k(j) = x_k(j) + q(j) x_k(j)^2 + sum_{N>=3} Delta_N(j) x_k(j)^N,
//
// whose coefficients depend on j but not on k: on the lattice
// x_k^{2 i nu} = e^{-i phi} Z_j exactly, so the local equation for the
// nearby zero of 1/y has k-independent coefficients and can be reverted once
// per j.  The quadratic coefficient q(j) equals -1/2 exactly whenever
// beta = 0 and delta = 1/2 (which covers the reference case); in general it
// is -h2(0)/h1'(0) and drifts linearly in beta and delta - 1/2.
//
// One loop x -> x e^{2 pi i} multiplies x^{2 i m nu} by e^{-4 pi m nu},
// which is absorbed by phi -> phi + 4 pi i nu; the half-turn x -> x e^{i pi}
// corresponds to phi -> phi + 2 pi i nu.  (A widely copied display gives the
// full-loop shift as 2 pi i nu; the lattice geometry -- each loop moves
// arg x_k by -2 pi -- forces 4 pi i nu.)

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "pvi/branches.hpp"
#include "pvi/errors.hpp"
#include "pvi/formal.hpp"
#include "pvi/gamma.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

// ---------------------------------------------------------------------------
// Reciprocal expansion.
// ---------------------------------------------------------------------------

template <class C>
struct ReciprocalExpansion {
    C nu{};
    C phi{};
    Theta<C> theta;
    int order = 0;               // rows y_1 .. y_order are populated
    BranchExpansion<C> branch;   // inverse-form expansion; series is 1/y

    // A_nm, with the e^{i m phi} dependence stripped: algebraic in
    // (nu, alpha, beta, gamma, delta) only.
    C coefficient(int n, int m) const {
        using std::exp;
        const C i = makeComplex<C>(0.0, 1.0);
        return branch.series.coefficient({n - 1, -m, 0}) *
               exp(-i * makeComplex<C>(double(m)) * phi);
    }
};

template <class C>
ReciprocalExpansion<C> reciprocalCoefficients(const C& nu, const C& phi, const Theta<C>& theta,
                                              int order) {
    if (order < 1) throw ConditionViolation("reciprocalCoefficients: order must be >= 1");
    ReciprocalExpansion<C> rec;
    rec.nu = nu;
    rec.phi = phi;
    rec.theta = theta;
    rec.branch = expandBranch(ClassTag::InvOscNuPhi, {{"nu", nu}, {"phi", phi}}, theta, order);
    int top = 0;
    for (const auto& [k, c] : rec.branch.series.terms()) top = std::max(top, k.n);
    rec.order = top + 1;
    return rec;
}

// Evaluate the reciprocal series (and its d/dL derivative, L = ln x) on the
// covering, optionally truncated to the first maxRows rows (0 = all).
template <class C>
std::pair<C, C> reciprocalValueAndDerivative(const ReciprocalExpansion<C>& rec, const C& L,
                                             int maxRows = 0) {
    using std::exp;
    const C lambda = rec.branch.lambda;  // -2 i nu
    C f(0), df(0);
    for (const auto& [k, c] : rec.branch.series.terms()) {
        if (maxRows > 0 && k.n + 1 > maxRows) continue;
        const C power = makeComplex<C>(double(k.n)) + makeComplex<C>(double(k.m)) * lambda;
        const C term = c * exp(power * L);
        f += term;
        df += term * power;
    }
    return {f, df};
}

template <class C>
C reciprocalValue(const ReciprocalExpansion<C>& rec, const C& L, int maxRows = 0) {
    return reciprocalValueAndDerivative(rec, L, maxRows).first;
}

// ---------------------------------------------------------------------------
// The zero lattice.
// ---------------------------------------------------------------------------

namespace detail {

// Z_1, Z_2 (roots of A11 X^2 + A10 X + A_{1,-1} in X = e^{i phi} x^{2 i nu});
// j = 1 takes the +sqrt of the principal radical.
template <class C>
std::array<C, 2> latticeRoots(const ReciprocalExpansion<C>& rec) {
    using std::sqrt;
    const C a10 = rec.coefficient(1, 0);
    const C a11 = rec.coefficient(1, 1);
    const C a1m1 = rec.coefficient(1, -1);
    if (absAsDouble(a11) < 1e-300)
        throw DegenerateRadical("lattice roots: A11 vanishes");
    const C half = a10 / (makeComplex<C>(2.0) * a11);
    const C radical = half * half - a1m1 / a11;
    const double scale = absAsDouble(half * half) + absAsDouble(a1m1 / a11);
    if (absAsDouble(radical) < 1e-28 * (scale + 1e-300))
        throw DegenerateRadical("lattice roots: the square-root argument vanishes");
    const C s = sqrt(radical);
    const std::array<C, 2> z = {s - half, -s - half};
    if (absAsDouble(z[0]) < 1e-300 || absAsDouble(z[1]) < 1e-300)
        throw DegenerateRadical("lattice roots: a quadratic root vanishes (ln undefined)");
    return z;
}

} // namespace detail

template <class C>
struct ZeroPoint {
    int k = 0;
    int j = 1;     // 1 or 2
    C logX{};      // ln x_k(j) on the covering
    C x{};
};

// ln x_k(j) = -phi/(2 nu) - (i/(2 nu)) Ln Z_j - k pi / nu   (principal Ln).
template <class C>
std::vector<ZeroPoint<C>> zeroLattice(const ReciprocalExpansion<C>& rec, int kFirst, int kCount) {
    using std::exp;
    using std::log;
    if (kCount < 1) throw ConditionViolation("zeroLattice: kCount must be >= 1");
    const std::array<C, 2> z = detail::latticeRoots(rec);
    const C i = makeComplex<C>(0.0, 1.0);
    const C twoNu = makeComplex<C>(2.0) * rec.nu;
    std::vector<ZeroPoint<C>> out;
    out.reserve(2 * kCount);
    for (int k = kFirst; k < kFirst + kCount; ++k) {
        for (int j = 1; j <= 2; ++j) {
            ZeroPoint<C> p;
            p.k = k;
            p.j = j;
            p.logX = -rec.phi / twoNu - i / twoNu * log(z[j - 1]) -
                     makeComplex<C>(double(k)) * piC<C>() / rec.nu;
            p.x = exp(p.logX);
            out.push_back(p);
        }
    }
    return out;
}

// r_max = min_j 1/|Z_j|: above this radius the level-1 zeros leave the
// series' convergence strip, so it bounds the radius from above.
template <class C>
double radiusUpperBound(const ReciprocalExpansion<C>& rec) {
    const std::array<C, 2> z = detail::latticeRoots(rec);
    return 1.0 / std::max(absAsDouble(z[0]), absAsDouble(z[1]));
}

// ---------------------------------------------------------------------------
// Pole corrections.
// ---------------------------------------------------------------------------

template <class C>
struct PoleCorrections {
    int j = 1;
    C quadratic{};          // coefficient of x_k^2 in xi_k; always -1/2
    std::vector<C> delta;   // delta[i] = Delta_{i+3}
};

// Solve 0 = sum_n t^{n-1} (1+u)^{n-1} h_n(u), h_n(u) = sum_m A_nm Z_j^m
// (1+u)^{2 i m nu}, order by order for u(t) = u_1 t + u_2 t^2 + ...; then
// xi = t (1 + u(t)).  On the lattice t = x_k(j) this is exact in k.
template <class C>
PoleCorrections<C> poleCorrections(const ReciprocalExpansion<C>& rec, int j, int nOrder) {
    if (j != 1 && j != 2) throw ConditionViolation("poleCorrections: j must be 1 or 2");
    if (nOrder < 2) throw ConditionViolation("poleCorrections: order must be >= 2");
    if (rec.order < nOrder)
        throw ConditionViolation("poleCorrections: the expansion has too few rows for this order");
    const C z = detail::latticeRoots(rec)[j - 1];
    const C i = makeComplex<C>(0.0, 1.0);
    const C twoINu = makeComplex<C>(2.0) * i * rec.nu;

    const int p = nOrder - 1;  // u is needed through t^p
    const int rows = nOrder;   // rows beyond n = nOrder start at t^nOrder

    // Powers Z^m for |m| <= rows.
    std::vector<C> zPow(2 * rows + 1);
    zPow[rows] = makeComplex<C>(1.0);
    for (int m = 1; m <= rows; ++m) {
        zPow[rows + m] = zPow[rows + m - 1] * z;
        zPow[rows - m] = zPow[rows - m + 1] / z;
    }

    // h_1'(0) = 2 i nu (A11 Z - A_{1,-1}/Z).
    const C hPrime = twoINu * (rec.coefficient(1, 1) * z - rec.coefficient(1, -1) / z);
    const double hScale = absAsDouble(rec.coefficient(1, 1) * z) +
                          absAsDouble(rec.coefficient(1, -1) / z);
    if (absAsDouble(hPrime) < 1e-14 * (hScale + 1e-300))
        throw ReversionBreakdown("poleCorrections: the local linear term vanishes");

    PowerSeries<C> u(p);  // u[0] = 0
    for (int step = 1; step <= p; ++step) {
        // Residual with the current u, truncated at t^step.
        PowerSeries<C> onePlusU(p, makeComplex<C>(1.0));
        onePlusU += u;
        PowerSeries<C> residual(p);
        PowerSeries<C> fPow(p, makeComplex<C>(1.0));  // (1+u)^{n-1}
        for (int n = 1; n <= rows; ++n) {
            PowerSeries<C> hn(p);
            for (int m = -n; m <= n; ++m) {
                const C a = rec.coefficient(n, m);
                if (absAsDouble(a) == 0.0) continue;
                const PowerSeries<C> osc =
                    powSeries(onePlusU, twoINu * makeComplex<C>(double(m)));
                hn += osc * (a * zPow[rows + m]);
            }
            // shift by t^{n-1}: accumulate into residual
            const PowerSeries<C> contrib = fPow * hn;
            for (int q = n - 1; q <= p; ++q) residual[q] += contrib[q - (n - 1)];
            if (n <= p) fPow = fPow * onePlusU;
        }
        u[step] = u[step] - residual[step] / hPrime;
    }

    PoleCorrections<C> out;
    out.j = j;
    out.quadratic = u[1];
    for (int n = 3; n <= nOrder; ++n) out.delta.push_back(u[n - 1]);
    return out;
}

// xi_k(j) from the truncated asymptotic series.
template <class C>
C poleSeriesValue(const ZeroPoint<C>& zp, const PoleCorrections<C>& pc) {
    C acc = zp.x + pc.quadratic * zp.x * zp.x;
    C pw = zp.x * zp.x;
    for (const C& d : pc.delta) {
        pw *= zp.x;
        acc += d * pw;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Newton refinement.
// ---------------------------------------------------------------------------

template <class C>
struct RefinedPole {
    C logX{};
    C x{};
    double residual = 0.0;
    int iterations = 0;
};

// Newton iteration on the truncated reciprocal series, in L = ln x.
template <class C>
RefinedPole<C> refinePole(const ReciprocalExpansion<C>& rec, const C& logXSeed,
                          int maxRows = 0) {
    using std::exp;
    const double eps = toDouble(ScalarTraits<C>::epsilon());
    C L = logXSeed;
    for (int it = 1; it <= 50; ++it) {
        const auto [f, df] = reciprocalValueAndDerivative(rec, L, maxRows);
        if (absAsDouble(df) < 1e-300)
            throw NoConvergence("refinePole: derivative vanished");
        const C step = f / df;
        L -= step;
        if (absAsDouble(step) <= 4.0 * eps * (1.0 + absAsDouble(L))) {
            RefinedPole<C> out;
            out.logX = L;
            out.x = exp(L);
            out.residual = absAsDouble(reciprocalValue(rec, L, maxRows));
            out.iterations = it;
            return out;
        }
    }
    throw NoConvergence("refinePole: Newton did not converge in 50 iterations");
}

// ---------------------------------------------------------------------------
// Analytic continuation.
// ---------------------------------------------------------------------------

// Full loops x -> x e^{2 pi i n}: phi gains 4 pi i nu per loop (each loop
// multiplies x^{2 i m nu} by e^{-4 pi m nu}).  The half-turn x -> x e^{i pi}
// corresponds to a 2 pi i nu shift.
template <class C>
C continueBranch(const C& nu, const C& phi, int loops) {
    return phi + makeComplex<C>(0.0, 4.0 * loops) * piC<C>() * nu;
}

// ---------------------------------------------------------------------------
// Reference constants for the quantum-cohomology branch (alpha = 9/2,
// beta = gamma = 0, delta = 1/2).
// ---------------------------------------------------------------------------

template <class C>
struct BranchConstants {
    C nu{};
    C phi{};
    Theta<C> theta;
};

template <class C>
BranchConstants<C> cp2ReferenceConstants() {
    using std::exp;
    using std::log;
    using std::sqrt;
    const C one = makeComplex<C>(1.0);
    const C two = makeComplex<C>(2.0);
    const C i = makeComplex<C>(0.0, 1.0);
    const C g = (one + sqrt(makeComplex<C>(5.0))) / two;  // golden ratio
    const C nu = two * log(g) / piC<C>();

    const C g2 = g * g;
    const C g4 = g2 * g2;
    const C twoINu = two * i * nu;
    const C gamma1 = gammaLanczos(one - twoINu);
    const C gamma2 = gammaLanczos(one - i * nu);
    const C gamma14 = gamma1 * gamma1 * gamma1 * gamma1;
    C gamma28 = gamma2 * gamma2;
    gamma28 *= gamma28;  // ^4
    gamma28 *= gamma28;  // ^8
    const C ratioG = (g4 + one) * (g4 + one) / ((g2 + one) * (g2 + one));
    const C pow2 = exp(makeComplex<C>(16.0) * i * nu * log(two));
    const C ratioNu = (one - twoINu) * (one - twoINu) * nu * nu /
                      ((one + twoINu) * (one + twoINu));
    const C s = -piC<C>() * piC<C>() * ratioG * pow2 * ratioNu * gamma14 / gamma28;

    BranchConstants<C> out;
    out.nu = nu;
    out.phi = i * log(s);
    out.theta = Theta<C>{C(0), C(0), C(0), makeComplex<C>(4.0)};
    return out;
}

} // namespace pvi
