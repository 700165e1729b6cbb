// Dense univariate formal power series over a complex scalar.
//
// Coefficients are stored by index 0..order; all operations truncate at a
// fixed order.  Used for the pole-correction reversion, the sin^2-phase
// series, and the hypergeometric expansions, where the grading is a plain
// power of one small variable.

#pragma once

#include <vector>

#include "pvi/errors.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

template <class C>
class PowerSeries {
public:
    PowerSeries() = default;
    explicit PowerSeries(int order) : c_(static_cast<size_t>(order) + 1, C(0)) {}
    PowerSeries(int order, const C& c0) : PowerSeries(order) { c_[0] = c0; }

    int order() const { return static_cast<int>(c_.size()) - 1; }

    const C& operator[](int k) const { return c_[static_cast<size_t>(k)]; }
    C& operator[](int k) { return c_[static_cast<size_t>(k)]; }

    PowerSeries& operator+=(const PowerSeries& o) {
        for (int k = 0; k <= order() && k <= o.order(); ++k) c_[k] += o[k];
        return *this;
    }
    PowerSeries& operator-=(const PowerSeries& o) {
        for (int k = 0; k <= order() && k <= o.order(); ++k) c_[k] -= o[k];
        return *this;
    }
    PowerSeries operator+(const PowerSeries& o) const { PowerSeries r(*this); r += o; return r; }
    PowerSeries operator-(const PowerSeries& o) const { PowerSeries r(*this); r -= o; return r; }

    PowerSeries operator*(const PowerSeries& o) const {
        PowerSeries r(order());
        for (int i = 0; i <= order(); ++i) {
            if (c_[i] == C(0)) continue;
            const int jmax = std::min(o.order(), order() - i);
            for (int j = 0; j <= jmax; ++j) r[i + j] += c_[i] * o[j];
        }
        return r;
    }

    PowerSeries& operator*=(const C& s) {
        for (auto& v : c_) v *= s;
        return *this;
    }
    PowerSeries operator*(const C& s) const { PowerSeries r(*this); r *= s; return r; }

    // Multiply by the monomial t^k.
    PowerSeries shifted(int k) const {
        PowerSeries r(order());
        for (int i = 0; i + k <= order(); ++i)
            if (i + k >= 0) r[i + k] = c_[i];
        return r;
    }

    C evaluate(const C& t) const {
        C acc(0);
        for (int k = order(); k >= 0; --k) acc = acc * t + c_[k];
        return acc;
    }

    std::vector<C>& coefficients() { return c_; }
    const std::vector<C>& coefficients() const { return c_; }

private:
    std::vector<C> c_;
};

// 1 / f, requiring an invertible constant term.
template <class C>
PowerSeries<C> reciprocal(const PowerSeries<C>& f) {
    if (absAsDouble(f[0]) == 0.0)
        throw ReciprocalOfZeroSeries("power series reciprocal requires a nonzero constant term");
    PowerSeries<C> h(f.order());
    h[0] = C(1) / f[0];
    for (int n = 1; n <= f.order(); ++n) {
        C acc(0);
        for (int k = 1; k <= n; ++k) acc += f[k] * h[n - k];
        h[n] = -acc / f[0];
    }
    return h;
}

// exp(f), requiring f(0) = 0.
template <class C>
PowerSeries<C> expSeries(const PowerSeries<C>& f) {
    PowerSeries<C> h(f.order());
    h[0] = C(1);
    for (int n = 1; n <= f.order(); ++n) {
        C acc(0);
        for (int k = 1; k <= n; ++k) acc += C(k) * f[k] * h[n - k];
        h[n] = acc / C(n);
    }
    return h;
}

// log(f), requiring f(0) = 1.
template <class C>
PowerSeries<C> logSeries(const PowerSeries<C>& f) {
    PowerSeries<C> h(f.order());
    for (int n = 1; n <= f.order(); ++n) {
        C acc(0);
        for (int k = 1; k < n; ++k) acc += C(k) * h[k] * f[n - k];
        h[n] = f[n] - acc / C(n);
    }
    return h;
}

// sqrt(f) with the branch fixed by sqrt(f[0]) (principal).
template <class C>
PowerSeries<C> sqrtSeries(const PowerSeries<C>& f) {
    using std::sqrt;
    if (absAsDouble(f[0]) == 0.0)
        throw ReciprocalOfZeroSeries("power series sqrt requires a nonzero constant term");
    PowerSeries<C> h(f.order());
    h[0] = sqrt(f[0]);
    for (int n = 1; n <= f.order(); ++n) {
        C acc(0);
        for (int k = 1; k < n; ++k) acc += h[k] * h[n - k];
        h[n] = (f[n] - acc) / (C(2) * h[0]);
    }
    return h;
}

// f^e = exp(e log f), requiring f(0) = 1.
template <class C>
PowerSeries<C> powSeries(const PowerSeries<C>& f, const C& e) {
    return expSeries(logSeries(f) * e);
}

// f(g(t)) with g(0) = 0, truncated at the common order (Horner form).
template <class C>
PowerSeries<C> compose(const PowerSeries<C>& f, const PowerSeries<C>& g) {
    PowerSeries<C> r(f.order());
    for (int k = f.order(); k >= 0; --k) {
        r = r * g;
        r[0] += f[k];
    }
    return r;
}

// d/dt.
template <class C>
PowerSeries<C> derivative(const PowerSeries<C>& f) {
    PowerSeries<C> r(f.order());
    for (int k = 1; k <= f.order(); ++k) r[k - 1] = C(k) * f[k];
    return r;
}

} // namespace pvi
