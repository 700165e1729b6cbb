// Weierstrass elliptic function on the lattice spanned by the periods
// (2 omega1, 2 omega2).
//
// Production route: the trigonometric q-series (DLMF 23.8.1 / 23.8.3 family)
//
//   P(z) = (pi/(2 omega1))^2 [ -1/3 + sin^{-2} v
//            + 8 sum_{n>=1} n q^{2n}/(1-q^{2n}) (1 - cos 2nv) ],
//   v = pi z / (2 omega1),  q = exp(i pi tau),  tau = omega2/omega1,
//
// with the argument first reduced to the fundamental cell so that
// |Im v| <= (pi/2) Im tau and every series term decays geometrically.
// The exact sign layout of the q-sum is validated against the oracle below
// (see tests); the derivative P'(z) is the term-wise v-derivative.
//
// Oracle route (shares nothing with the above): the defining lattice sum
//
//   P(z) = 1/z^2 + sum_{W != 0} [ 1/(z-W)^2 - 1/W^2 ]
//
// truncated to the centred square |m|,|n| <= M, plus tail corrections
// 3 z^2 S4' + 5 z^4 S6' + 7 z^6 S8' + 9 z^8 S10' where Sk' is the part of
// the Eisenstein sum Sk = sum' W^{-k} outside the square, itself obtained
// from a direct sum over a much larger square.  (Expanding 1/(z-W)^2 - 1/W^2
// for |W| > |z| and using the symmetry of the truncation region, which
// cancels odd powers, gives exactly these tail terms.)
//
// Invariants g2 = 60 S4, g3 = 140 S6 come from the same direct sums, so the
// differential equation (P')^2 = 4P^3 - g2 P - g3 is an independent check
// of both routes.

#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "pvi/errors.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

template <class C>
struct Lattice {
    C omega1; // half-period
    C omega2; // half-period, Im(omega2/omega1) > 0 required
};

namespace detail {

// Real coordinates (s, t) of z in the period basis: z = s 2w1 + t 2w2.
template <class C>
std::pair<double, double> latticeCoordinates(const C& z, const Lattice<C>& L) {
    const Complex64 A = toComplex64(C(L.omega1 * C(makeComplex<C>(2.0))));
    const Complex64 B = toComplex64(C(L.omega2 * C(makeComplex<C>(2.0))));
    const Complex64 zz = toComplex64(z);
    const double det = A.real() * B.imag() - A.imag() * B.real();
    if (std::abs(det) < 1e-300) {
        throw DegenerateLattice("period parallelogram has (numerically) zero area");
    }
    const double s = (zz.real() * B.imag() - zz.imag() * B.real()) / det;
    const double t = (A.real() * zz.imag() - A.imag() * zz.real()) / det;
    return {s, t};
}

template <class C>
void requireNondegenerate(const Lattice<C>& L) {
    const Complex64 tau = toComplex64(C(L.omega2 / L.omega1));
    if (!(tau.imag() > 1e-12)) {
        throw DegenerateLattice("Im(omega2/omega1) must exceed 1e-12");
    }
}

} // namespace detail

// z reduced into the centred fundamental cell (coordinates in [-1/2, 1/2)).
template <class C>
C latticeReduce(const C& z, const Lattice<C>& L) {
    detail::requireNondegenerate(L);
    auto [s, t] = detail::latticeCoordinates(z, L);
    const double ms = std::floor(s + 0.5);
    const double mt = std::floor(t + 0.5);
    C r = z - C(makeComplex<C>(2.0 * ms)) * L.omega1 - C(makeComplex<C>(2.0 * mt)) * L.omega2;
    const double scale = absAsDouble(L.omega1) + absAsDouble(L.omega2);
    if (absAsDouble(r) < 1e-13 * scale) {
        throw LatticePoint("argument is (numerically) a lattice point");
    }
    return r;
}

// Weierstrass P by the q-series.
template <class C>
C weierstrassP(const C& z, const Lattice<C>& L) {
    using std::abs;
    using std::cos;
    using std::exp;
    using std::sin;
    using R = RealOf<C>;
    const C zr = latticeReduce(z, L);
    const C i1 = makeComplex<C>(0.0, 1.0);
    const C tau = L.omega2 / L.omega1;
    const C v = piC<C>() * zr / (C(makeComplex<C>(2.0)) * L.omega1);
    const C q2 = exp(C(i1 * piC<C>() * tau * C(makeComplex<C>(2.0))));   // q^2
    const C E = exp(C(i1 * v * C(makeComplex<C>(2.0))));                  // e^{2iv}
    const C P = q2 * E;   // |P| < 1 after reduction
    const C Q = q2 / E;   // |Q| < 1 after reduction
    const R eps = ScalarTraits<C>::epsilon();

    const C sv = sin(v);
    C sum = makeComplex<C>(-1.0 / 3.0) + C(makeComplex<C>(1.0)) / (sv * sv);

    C pn = makeComplex<C>(1.0), qn = makeComplex<C>(1.0), q2n = makeComplex<C>(1.0);
    for (int n = 1; n <= 4000; ++n) {
        pn *= P;
        qn *= Q;
        q2n *= q2;
        // q^{2n} (1 - cos 2nv) = q^{2n} - (P^n + Q^n)/2
        const C term = C(makeComplex<C>(8.0 * n)) * (q2n - (pn + qn) * C(makeComplex<C>(0.5)))
                       / (C(makeComplex<C>(1.0)) - q2n);
        sum += term;
        if (R(n) * (abs(pn) + abs(qn) + abs(q2n)) < eps) break;
        if (n == 4000) throw NoConvergence("Weierstrass q-series did not converge");
    }
    const C pref = piC<C>() / (C(makeComplex<C>(2.0)) * L.omega1);
    return pref * pref * sum;
}

// d/dz of the q-series above (term-wise derivative, same reduction).
template <class C>
C weierstrassPPrime(const C& z, const Lattice<C>& L) {
    using std::abs;
    using std::cos;
    using std::exp;
    using std::sin;
    using R = RealOf<C>;
    const C zr = latticeReduce(z, L);
    const C i1 = makeComplex<C>(0.0, 1.0);
    const C tau = L.omega2 / L.omega1;
    const C v = piC<C>() * zr / (C(makeComplex<C>(2.0)) * L.omega1);
    const C q2 = exp(C(i1 * piC<C>() * tau * C(makeComplex<C>(2.0))));
    const C E = exp(C(i1 * v * C(makeComplex<C>(2.0))));
    const C P = q2 * E;
    const C Q = q2 / E;
    const R eps = ScalarTraits<C>::epsilon();

    const C sv = sin(v);
    const C cv = cos(v);
    // d/dv [ sin^{-2} v ] = -2 cos v / sin^3 v
    C sum = C(makeComplex<C>(-2.0)) * cv / (sv * sv * sv);

    C pn = makeComplex<C>(1.0), qn = makeComplex<C>(1.0), q2n = makeComplex<C>(1.0);
    for (int n = 1; n <= 4000; ++n) {
        pn *= P;
        qn *= Q;
        q2n *= q2;
        // d/dv [ -8 n q^{2n} cos 2nv ] = 16 n^2 q^{2n} sin 2nv
        //                              = 16 n^2 (P^n - Q^n) / (2i)
        const C term = C(makeComplex<C>(8.0 * n * n)) * (pn - qn) / i1
                       / (C(makeComplex<C>(1.0)) - q2n);
        sum += term;
        if (R(n) * R(n) * (abs(pn) + abs(qn) + abs(q2n)) < eps) break;
        if (n == 4000) throw NoConvergence("Weierstrass q-series did not converge");
    }
    const C pref = piC<C>() / (C(makeComplex<C>(2.0)) * L.omega1);
    return pref * pref * pref * sum;
}

// Eisenstein sums S_k = sum over nonzero lattice points of W^{-k}, k = 4, 6,
// 8, 10, by direct summation over the centred square |m|, |n| <= M.
inline std::array<Complex64, 4> eisensteinSums(const Lattice<Complex64>& L, int M) {
    detail::requireNondegenerate(L);
    const Complex64 A = 2.0 * L.omega1;
    const Complex64 B = 2.0 * L.omega2;
    std::array<Complex64, 4> s{};
    for (int m = -M; m <= M; ++m) {
        for (int n = -M; n <= M; ++n) {
            if (m == 0 && n == 0) continue;
            const Complex64 W = double(m) * A + double(n) * B;
            const Complex64 w2i = 1.0 / (W * W);
            const Complex64 w4i = w2i * w2i;
            s[0] += w4i;
            s[1] += w4i * w2i;
            s[2] += w4i * w4i;
            s[3] += w4i * w4i * w2i;
        }
    }
    return s;
}

// Square-truncation errors of the signed sums decay like M^{-2} with
// symmetric corrections in even powers only, so one Richardson step in
// 1/M^2 (combining the squares M and 2M) removes the leading tail.
inline std::array<Complex64, 4> eisensteinSumsExtrapolated(const Lattice<Complex64>& L, int M) {
    const auto a = eisensteinSums(L, M);
    const auto b = eisensteinSums(L, 2 * M);
    std::array<Complex64, 4> r{};
    for (std::size_t k = 0; k < 4; ++k) r[k] = (4.0 * b[k] - a[k]) / 3.0;
    return r;
}

// Invariants g2 = 60 S4, g3 = 140 S6 by direct summation.
inline std::pair<Complex64, Complex64> latticeInvariants(const Lattice<Complex64>& L, int M = 600) {
    const auto s = eisensteinSumsExtrapolated(L, M);
    return {60.0 * s[0], 140.0 * s[1]};
}

// Oracle: truncated defining sum with Eisenstein tail corrections.  The
// overload taking precomputed far sums lets callers amortise the large
// Eisenstein summation over many evaluation points on the same lattice.
inline Complex64 weierstrassPLatticeSum(const Complex64& z, const Lattice<Complex64>& L,
                                        const std::array<Complex64, 4>& far, int M = 40) {
    const Complex64 zr = latticeReduce(z, L);
    const Complex64 A = 2.0 * L.omega1;
    const Complex64 B = 2.0 * L.omega2;

    Complex64 acc = 1.0 / (zr * zr);
    std::array<Complex64, 4> inner{}; // S4, S6, S8, S10 restricted to the square
    for (int m = -M; m <= M; ++m) {
        for (int n = -M; n <= M; ++n) {
            if (m == 0 && n == 0) continue;
            const Complex64 W = double(m) * A + double(n) * B;
            const Complex64 d = zr - W;
            acc += 1.0 / (d * d) - 1.0 / (W * W);
            const Complex64 w2i = 1.0 / (W * W);
            const Complex64 w4i = w2i * w2i;
            inner[0] += w4i;
            inner[1] += w4i * w2i;
            inner[2] += w4i * w4i;
            inner[3] += w4i * w4i * w2i;
        }
    }
    const Complex64 z2 = zr * zr;
    const Complex64 z4 = z2 * z2;
    acc += 3.0 * z2 * (far[0] - inner[0]);
    acc += 5.0 * z4 * (far[1] - inner[1]);
    acc += 7.0 * z4 * z2 * (far[2] - inner[2]);
    acc += 9.0 * z4 * z4 * (far[3] - inner[3]);
    return acc;
}

inline Complex64 weierstrassPLatticeSum(const Complex64& z, const Lattice<Complex64>& L,
                                        int M = 40, int Mfar = 900) {
    return weierstrassPLatticeSum(z, L, eisensteinSumsExtrapolated(L, Mfar), M);
}

} // namespace pvi
