// Complex Gamma function, two independent routes.
//
//  * gammaLanczos: Lanczos approximation (g = 7, 9 terms), ~15 correct
//    digits, reflection formula for Re z < 1/2.  Primary route.
//  * gammaStirling: recurrence-shifted Stirling series with Bernoulli terms.
//    Independent implementation used to cross-check the Lanczos route.
//
// Only moderate |z| is needed (arguments like 1 - 2i*nu), so no scaling
// heroics are required.

#pragma once

#include <array>

#include "pvi/errors.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

template <class C>
C gammaLanczos(const C& z) {
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sqrt;
    using R = RealOf<C>;

    static const std::array<double, 9> coef = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    const R pi = piValue<C>();

    if (toDouble(realPart(z)) < 0.5) {
        // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
        return C(pi) / (sin(C(pi) * z) * gammaLanczos(C(1) - z));
    }
    const C zm = z - C(1);
    C a = makeComplex<C>(coef[0]);
    for (int k = 1; k < 9; ++k) a += makeComplex<C>(coef[k]) / (zm + C(k));
    const C t = zm + makeComplex<C>(7.5);
    return sqrt(C(2) * C(pi)) * exp((zm + makeComplex<C>(0.5)) * log(t) - t) * a;
}

template <class C>
C logGammaStirling(const C& z) {
    using std::log;
    using R = RealOf<C>;

    // B_{2n} for n = 1..15.
    static const std::array<std::pair<double, double>, 15> bern = {{
        {1.0, 6.0},
        {-1.0, 30.0},
        {1.0, 42.0},
        {-1.0, 30.0},
        {5.0, 66.0},
        {-691.0, 2730.0},
        {7.0, 6.0},
        {-3617.0, 510.0},
        {43867.0, 798.0},
        {-174611.0, 330.0},
        {854513.0, 138.0},
        {-236364091.0, 2730.0},
        {8553103.0, 6.0},
        {-23749461029.0, 870.0},
        {8615841276005.0, 14322.0},
    }};
    const R pi = piValue<C>();

    // Shift until the asymptotic series is accurate at the working precision.
    const double shiftTo = (ScalarTraits<C>::digits10 > 20) ? 60.0 : 20.0;
    C shifted = z;
    C logShift(0);
    int guard = 0;
    while (toDouble(realPart(shifted)) < shiftTo) {
        logShift += log(shifted);
        shifted += C(1);
        if (++guard > 200) throw NoConvergence("logGammaStirling: shift did not terminate");
    }

    C acc = (shifted - makeComplex<C>(0.5)) * log(shifted) - shifted +
            makeComplex<C>(0.5) * log(C(2) * C(pi));
    const C inv2 = C(1) / (shifted * shifted);
    C p = C(1) / shifted;
    for (int n = 1; n <= 15; ++n) {
        const C b = makeComplex<C>(bern[n - 1].first) / makeComplex<C>(bern[n - 1].second);
        acc += b / C((2 * n) * (2 * n - 1)) * p;
        p *= inv2;
    }
    return acc - logShift;
}

template <class C>
C gammaStirling(const C& z) {
    using std::exp;
    return exp(logGammaStirling(z));
}

} // namespace pvi
