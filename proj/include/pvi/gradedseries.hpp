// Graded series with exponents n + m*lambda and polynomial ln x factors.
//
// A term is  c * x^(n + m*lambda) * (ln x)^l  keyed by integers (n, m, l).
// lambda is the class exponent (sigma, rho, omega, 2 i nu, ...); terms with
// m = 0 are lambda-agnostic, so x-polynomials combine freely with any series.
// Truncation is by the integer level n <= maxN together with caps |m| <= maxM
// and l <= maxL large enough that in-cap results of products are exact (the
// lattices used here have m >= -n on the negative side, so maxM is chosen
// with headroom by the callers).
//
// The grading never inspects Re(lambda): the same engine serves expansions
// inside the critical strip, on its boundary (purely imaginary combinations),
// and continued beyond it.

#pragma once

#include <map>
#include <vector>

#include "pvi/errors.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

struct GradedKey {
    int n = 0;
    int m = 0;
    int l = 0;
    friend bool operator<(const GradedKey& a, const GradedKey& b) {
        if (a.n != b.n) return a.n < b.n;
        if (a.m != b.m) return a.m < b.m;
        return a.l < b.l;
    }
    friend bool operator==(const GradedKey& a, const GradedKey& b) {
        return a.n == b.n && a.m == b.m && a.l == b.l;
    }
};

struct GradedCaps {
    int maxN = 10;
    int maxM = 24;
    int maxL = 12;
};

template <class C>
class GradedSeries {
public:
    GradedSeries() = default;
    GradedSeries(const C& lambda, GradedCaps caps) : lambda_(lambda), caps_(caps) {}

    static GradedSeries monomial(const C& lambda, GradedCaps caps, GradedKey k, const C& coeff) {
        GradedSeries s(lambda, caps);
        s.insert(k, coeff);
        return s;
    }

    // Polynomial in x alone: sum of coeff * x^power.
    static GradedSeries xPolynomial(const C& lambda, GradedCaps caps,
                                    std::initializer_list<std::pair<int, double>> parts) {
        GradedSeries s(lambda, caps);
        for (const auto& p : parts) s.insert({p.first, 0, 0}, makeComplex<C>(p.second));
        return s;
    }

    const C& lambda() const { return lambda_; }
    const GradedCaps& caps() const { return caps_; }
    const std::map<GradedKey, C>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void insert(GradedKey k, const C& coeff) {
        if (k.n > caps_.maxN || k.m > caps_.maxM || k.m < -caps_.maxM || k.l > caps_.maxL ||
            k.l < 0)
            return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, coeff);
        } else {
            it->second += coeff;
        }
    }

    C coefficient(GradedKey k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? C(0) : it->second;
    }

    int minLevel() const {
        return terms_.empty() ? caps_.maxN + 1 : terms_.begin()->first.n;
    }

    GradedSeries& operator+=(const GradedSeries& o) {
        for (const auto& [k, c] : o.terms_) insert(k, c);
        return *this;
    }
    GradedSeries& operator-=(const GradedSeries& o) {
        for (const auto& [k, c] : o.terms_) insert(k, -c);
        return *this;
    }
    GradedSeries operator+(const GradedSeries& o) const { GradedSeries r(*this); r += o; return r; }
    GradedSeries operator-(const GradedSeries& o) const { GradedSeries r(*this); r -= o; return r; }
    GradedSeries operator-() const {
        GradedSeries r(*this);
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }

    GradedSeries& operator*=(const C& s) {
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    GradedSeries operator*(const C& s) const { GradedSeries r(*this); r *= s; return r; }

    GradedSeries operator*(const GradedSeries& o) const {
        GradedSeries r(lambda_, caps_);
        for (const auto& [ka, ca] : terms_) {
            if (ka.n > caps_.maxN) continue;
            for (const auto& [kb, cb] : o.terms_) {
                GradedKey k{ka.n + kb.n, ka.m + kb.m, ka.l + kb.l};
                if (k.n > caps_.maxN) break;  // kb sorted by n: later ones only larger
                r.insert(k, ca * cb);
            }
        }
        return r;
    }

    // Multiply by a single term.
    GradedSeries shifted(GradedKey dk, const C& factor) const {
        GradedSeries r(lambda_, caps_);
        for (const auto& [k, c] : terms_)
            r.insert({k.n + dk.n, k.m + dk.m, k.l + dk.l}, c * factor);
        return r;
    }

    // d/dx:  (n + m lambda) x^(e-1) ln^l + l x^(e-1) ln^(l-1).
    GradedSeries derivative() const {
        GradedSeries r(lambda_, caps_);
        for (const auto& [k, c] : terms_) {
            const C e = C(k.n) + C(k.m) * lambda_;
            r.insert({k.n - 1, k.m, k.l}, c * e);
            if (k.l > 0) r.insert({k.n - 1, k.m, k.l - 1}, c * C(k.l));
        }
        return r;
    }

    // Keep terms with n <= level only.
    GradedSeries truncated(int level) const {
        GradedSeries r(lambda_, caps_);
        for (const auto& [k, c] : terms_) {
            if (k.n > level) break;
            r.insert(k, c);
        }
        return r;
    }

    // Remove terms below a magnitude floor (cleans exact-zero slots that
    // pick up roundoff).
    GradedSeries& prune(double eps) {
        double scale = 0.0;
        for (const auto& [k, c] : terms_) scale = std::max(scale, absAsDouble(c));
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (absAsDouble(it->second) < eps * scale)
                it = terms_.erase(it);
            else
                ++it;
        }
        return *this;
    }

    // Evaluate at ln x = L (a point of the universal covering).
    C evaluate(const C& L) const {
        using std::exp;
        C acc(0);
        for (const auto& [k, c] : terms_) {
            C lnPow(1);
            for (int i = 0; i < k.l; ++i) lnPow *= L;
            acc += c * exp((C(k.n) + C(k.m) * lambda_) * L) * lnPow;
        }
        return acc;
    }

    // Evaluate together with a truncation-error estimate: the magnitude of
    // the top retained integer level's contribution.
    std::pair<C, double> evaluateWithError(const C& L) const {
        using std::exp;
        C acc(0);
        int top = minLevel();
        for (const auto& [k, c] : terms_) top = std::max(top, k.n);
        double topAbs = 0.0;
        for (const auto& [k, c] : terms_) {
            C lnPow(1);
            for (int i = 0; i < k.l; ++i) lnPow *= L;
            const C term = c * exp((C(k.n) + C(k.m) * lambda_) * L) * lnPow;
            acc += term;
            if (k.n == top) topAbs += absAsDouble(term);
        }
        return {acc, topAbs};
    }

    std::map<GradedKey, C>& mutableTerms() { return terms_; }

private:
    C lambda_{};
    GradedCaps caps_{};
    std::map<GradedKey, C> terms_;
};

// Largest coefficient magnitude (0 for the empty series).
template <class C>
double maxAbsCoeff(const GradedSeries<C>& s) {
    double m = 0.0;
    for (const auto& [k, c] : s.terms()) m = std::max(m, absAsDouble(c));
    return m;
}

// Copy into fresh caps (terms outside the new caps are dropped).
template <class C>
GradedSeries<C> withCaps(const GradedSeries<C>& s, GradedCaps caps) {
    GradedSeries<C> r(s.lambda(), caps);
    for (const auto& [k, c] : s.terms()) r.insert(k, c);
    return r;
}

// The helpers below require a "strictly graded" series: every key has
// n >= 0, and keys with n = 0 have m >= 1.  A k-fold product of such keys
// either accumulates n past maxN (each n >= 1 factor contributes) or, for
// the factors with n = 0, accumulates m by at least one each, which can be
// offset only by the bounded negative m (at most maxM in magnitude) of each
// n >= 1 factor.  Hence every product of more than
// maxN * (maxM + 1) + maxM factors exceeds the caps, which bounds all
// Neumann/Taylor loops below without inspecting Re(lambda).  In practice the
// loops exit as soon as a power underflows the caps.

namespace graded_detail {

template <class C>
int factorBound(const GradedSeries<C>& s) {
    return s.caps().maxN * (s.caps().maxM + 1) + s.caps().maxM + 1;
}

template <class C>
void requireStrict(const GradedSeries<C>& u, const char* what) {
    for (const auto& [k, c] : u.terms()) {
        (void)c;
        if (k.n < 0 || (k.n == 0 && k.m < 1))
            throw Error("NotStrictlyGraded",
                        std::string(what) +
                            ": series must have n >= 0 with m >= 1 on the n = 0 level");
    }
}

} // namespace graded_detail

// 1 / (c0 + u) for invertible c0 and strictly graded u, via the Neumann sum.
template <class C>
GradedSeries<C> gradedInverseUnit(const GradedSeries<C>& f) {
    const C c0 = f.coefficient({0, 0, 0});
    if (absAsDouble(c0) < 1e-300)
        throw ReciprocalOfZeroSeries("graded inverse requires an invertible constant term");
    GradedSeries<C> u = f * (C(1) / c0);
    u.mutableTerms().erase(GradedKey{0, 0, 0});
    graded_detail::requireStrict(u, "gradedInverseUnit");
    GradedSeries<C> acc(f.lambda(), f.caps());
    acc.insert({0, 0, 0}, C(1));
    GradedSeries<C> pw = acc;
    for (int k = 1; k <= graded_detail::factorBound(f); ++k) {
        pw = pw * u;
        if (pw.empty()) break;
        if (k % 2 == 1)
            acc -= pw;
        else
            acc += pw;
    }
    return acc * (C(1) / c0);
}

// exp(g) for strictly graded g.
template <class C>
GradedSeries<C> gradedExp(const GradedSeries<C>& g) {
    graded_detail::requireStrict(g, "gradedExp");
    GradedSeries<C> acc(g.lambda(), g.caps());
    acc.insert({0, 0, 0}, C(1));
    GradedSeries<C> pw = acc;
    for (int k = 1; k <= graded_detail::factorBound(g); ++k) {
        pw = pw * g * (C(1) / C(k));
        if (pw.empty()) break;
        acc += pw;
    }
    return acc;
}

// log(1 + u) for strictly graded u (the constant term of f must be 1).
template <class C>
GradedSeries<C> gradedLogUnit(const GradedSeries<C>& f) {
    if (absAsDouble(C(f.coefficient({0, 0, 0}) - C(1))) > 1e-12 * (1.0 + maxAbsCoeff(f)))
        throw Error("NotUnitSeries", "gradedLogUnit: constant term must be 1");
    GradedSeries<C> u = f;
    u.mutableTerms().erase(GradedKey{0, 0, 0});
    graded_detail::requireStrict(u, "gradedLogUnit");
    GradedSeries<C> acc(f.lambda(), f.caps());
    GradedSeries<C> pw(f.lambda(), f.caps());
    pw.insert({0, 0, 0}, C(1));
    for (int k = 1; k <= graded_detail::factorBound(f); ++k) {
        pw = pw * u;
        if (pw.empty()) break;
        const C w = (k % 2 == 1 ? C(1) : C(-1)) / C(k);
        acc += pw * w;
    }
    return acc;
}

} // namespace pvi
