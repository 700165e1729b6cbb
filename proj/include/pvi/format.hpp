// Deterministic numeric formatting shared by the CLI and the golden tests.
//
// All floating output goes through %.17g (shortest round-trippable form for
// doubles) or a fixed scientific width, so repeated runs are byte-identical.

#pragma once

#include <cstdio>
#include <string>

#include "pvi/scalar.hpp"

namespace pvi {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string sci15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15e", v);
    return buf;
}

inline std::string g17(const Complex64& z) {
    return "[" + g17(z.real()) + "," + g17(z.imag()) + "]";
}

template <class C>
std::string g17c(const C& z) {
    return g17(toComplex64(z));
}

} // namespace pvi
