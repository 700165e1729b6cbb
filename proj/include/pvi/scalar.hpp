// Complex scalar abstraction.
//
// The whole library is templated on the complex type C so that every series
// recursion, evaluation, and refinement can run either in double precision
// (std::complex<double>) or in 50-digit precision
// (boost::multiprecision::cpp_complex_50).  This header provides the traits
// and the small set of helpers that generic code needs; everything else is
// reached through unqualified calls resolved by ADL.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace pvi {

using Complex64 = std::complex<double>;
using ComplexMP = boost::multiprecision::cpp_complex_50;
using RealMP    = ComplexMP::value_type;

template <class C>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex64> {
    using real_type = double;
    static constexpr int digits10 = 16;
    static double epsilon() { return std::numeric_limits<double>::epsilon(); }
};

template <>
struct ScalarTraits<ComplexMP> {
    using real_type = RealMP;
    static constexpr int digits10 = 50;
    static RealMP epsilon() { return std::numeric_limits<RealMP>::epsilon(); }
};

template <class C>
using RealOf = typename ScalarTraits<C>::real_type;

// Uniform construction from double components.
template <class C>
C makeComplex(double re, double im = 0.0) {
    if constexpr (std::is_same_v<C, Complex64>) {
        return Complex64(re, im);
    } else {
        return C(re, im);
    }
}

// pi as the complex scalar C (exact at the working precision).
template <class C>
C piC() {
    if constexpr (std::is_same_v<C, Complex64>) {
        return Complex64(3.141592653589793238462643383279502884, 0.0);
    } else {
        return C(boost::math::constants::pi<RealOf<C>>());
    }
}

// Down-conversion to double precision (for reporting and tolerances).
inline double toDouble(double v) { return v; }
inline double toDouble(const RealMP& v) { return v.convert_to<double>(); }

inline Complex64 toComplex64(const Complex64& v) { return v; }
inline Complex64 toComplex64(const ComplexMP& v) {
    return Complex64(v.real().convert_to<double>(), v.imag().convert_to<double>());
}

template <class C>
C fromComplex64(const Complex64& v) {
    return makeComplex<C>(v.real(), v.imag());
}

// |z| as a double, usable in thresholds regardless of the scalar type.
template <class C>
double absAsDouble(const C& z) {
    using std::abs;
    return toDouble(abs(z));
}

template <class C>
RealOf<C> realPart(const C& z) {
    if constexpr (std::is_same_v<C, Complex64>) {
        return z.real();
    } else {
        return z.real();
    }
}

template <class C>
RealOf<C> imagPart(const C& z) {
    return z.imag();
}

template <class C>
RealOf<C> piValue() {
    if constexpr (std::is_same_v<C, Complex64>) {
        return 3.141592653589793238462643383279502884;
    } else {
        return boost::math::constants::pi<RealOf<C>>();
    }
}

// exp(z) guarded against overflow of the real exponent.
template <class C>
bool expWouldOverflow(const C& z) {
    const double re = toDouble(realPart(z));
    const double lim = (ScalarTraits<C>::digits10 > 20) ? 1.0e6 : 700.0;
    return re > lim || re < -lim;
}

} // namespace pvi
