// Critical-behavior expansion engine for Painleve VI.
//
// Sixteen behavior classes at x = 0 are built by one generic graded sweep:
// seed the monomials that define the class (leading terms and integration
// constants), then determine every remaining lattice slot level by level from
// the cleared-form residual.  At level n the unknown slots c_(n,m,l) enter the
// residual linearly through the images
//
//   L[x^e ln^l x] = dR/dy * x^e ln^l + dR/dy' * (e x^(e-1) ln^l + l x^(e-1) ln^(l-1))
//                 + dR/dy'' * (e(e-1) x^(e-2) ln^l + l(2e-1) x^(e-2) ln^(l-1)
//                              + l(l-1) x^(e-2) ln^(l-2)),        e = n + m lambda,
//
// so equating the residual to zero at the lowest affected level gives a small
// (generally rectangular) linear system per level.  Rows are merged whenever
// two lattice exponents coincide within 1e-9; a merged system that loses rank
// raises ResonanceError, and an equation that no slot can cancel raises
// ConditionViolation (that is exactly the classical resonant obstruction that
// forces a logarithm).
//
// Inverse-type classes (oscillatory and logarithmic ones bounded away from 0)
// store the denominator D of y = 1/D; D/x solves the x/y-transformed equation,
// so those classes reuse the direct sweep on the transformed parameters.
// Expansions at x = 1 and x = infinity are transports of x = 0 classes.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pvi/errors.hpp"
#include "pvi/formal.hpp"
#include "pvi/gradedseries.hpp"
#include "pvi/linsolve.hpp"
#include "pvi/monodromy.hpp"
#include "pvi/parameters.hpp"
#include "pvi/pvieq.hpp"
#include "pvi/scalar.hpp"
#include "pvi/symmetry.hpp"

namespace pvi {

// ---------------------------------------------------------------------------
// Taxonomy.
// ---------------------------------------------------------------------------

enum class ClassTag {
    PowerGeneric,   // y = sum x^n sum_{|m|<=n} c_nm (a x^sigma)^m, leading a x^(1-sigma)
    PowerRho,       // constant leading term, lattice x^(n + m rho), m >= 0
    PowerNegOmega,  // y = (1/a) x^(-omega) (1 + ...), alpha = 0
    InvOscNuPhi,    // y = 1 / [A sin(2 nu ln x + phi) + B + O(x)]
    InvOscA,        // degenerate oscillatory inverse, half lattice, constant a
    TaylorRow1,     // y = b1 x + ..., b1 from (-2beta, 1-2delta), no free constant
    TaylorRow2,     // resonant version of TaylorRow1, free constant at x^(|N|+1)
    TaylorRow3,     // constant leading term (sqrt alpha + (-)^k sqrt gamma)/sqrt alpha
    TaylorRow4,     // resonant version of TaylorRow3, free constant at x^|N|
    TaylorRow5,     // alpha = gamma = 0: y = a + (1-a)(delta-beta) x + ...
    TaylorRow6,     // theta0 = thetax = 0: y = a x + a(a-1)(gamma-alpha-1/2) x^2 + ...
    LogRow1,        // Taylor start, log enters at x^(|N|+1) (or at x when N = 0)
    LogRow2,        // y = [(q/4)(a + ln x)^2 + 2 beta / q] x + ..., q = 2beta+1-2delta
    LogRow3,        // constant start, log enters at x^|N|
    InvLogRow1,     // y = 1 / [a +- sqrt(2 alpha) ln x + ...], alpha = gamma != 0
    InvLogRow2,     // y = 1 / [alpha/(alpha-gamma) + ((gamma-alpha)/2)(a+ln x)^2 + ...]
};

inline const char* classTagName(ClassTag t) {
    switch (t) {
        case ClassTag::PowerGeneric: return "PowerGeneric";
        case ClassTag::PowerRho: return "PowerRho";
        case ClassTag::PowerNegOmega: return "PowerNegOmega";
        case ClassTag::InvOscNuPhi: return "InvOscNuPhi";
        case ClassTag::InvOscA: return "InvOscA";
        case ClassTag::TaylorRow1: return "TaylorRow1";
        case ClassTag::TaylorRow2: return "TaylorRow2";
        case ClassTag::TaylorRow3: return "TaylorRow3";
        case ClassTag::TaylorRow4: return "TaylorRow4";
        case ClassTag::TaylorRow5: return "TaylorRow5";
        case ClassTag::TaylorRow6: return "TaylorRow6";
        case ClassTag::LogRow1: return "LogRow1";
        case ClassTag::LogRow2: return "LogRow2";
        case ClassTag::LogRow3: return "LogRow3";
        case ClassTag::InvLogRow1: return "InvLogRow1";
        case ClassTag::InvLogRow2: return "InvLogRow2";
    }
    return "?";
}

inline ClassTag classTagFromName(const std::string& s) {
    static const std::pair<const char*, ClassTag> table[] = {
        {"PowerGeneric", ClassTag::PowerGeneric},
        {"PowerRho", ClassTag::PowerRho},
        {"PowerNegOmega", ClassTag::PowerNegOmega},
        {"InvOscNuPhi", ClassTag::InvOscNuPhi},
        {"InvOscA", ClassTag::InvOscA},
        {"TaylorRow1", ClassTag::TaylorRow1},
        {"TaylorRow2", ClassTag::TaylorRow2},
        {"TaylorRow3", ClassTag::TaylorRow3},
        {"TaylorRow4", ClassTag::TaylorRow4},
        {"TaylorRow5", ClassTag::TaylorRow5},
        {"TaylorRow6", ClassTag::TaylorRow6},
        {"LogRow1", ClassTag::LogRow1},
        {"LogRow2", ClassTag::LogRow2},
        {"LogRow3", ClassTag::LogRow3},
        {"InvLogRow1", ClassTag::InvLogRow1},
        {"InvLogRow2", ClassTag::InvLogRow2},
    };
    for (const auto& [name, tag] : table)
        if (s == name) return tag;
    throw Error("UnknownClass", "no expansion class named '" + s + "'");
}

enum class CriticalPoint { Zero, One, Infinity };

inline const char* criticalPointName(CriticalPoint p) {
    switch (p) {
        case CriticalPoint::Zero: return "0";
        case CriticalPoint::One: return "1";
        case CriticalPoint::Infinity: return "inf";
    }
    return "?";
}

// How the stored series E(s) in the local variable s produces y.
enum class ValueForm { Direct, Inverse, OneMinusInverse };

inline const char* valueFormName(ValueForm f) {
    switch (f) {
        case ValueForm::Direct: return "direct";
        case ValueForm::Inverse: return "inverse";
        case ValueForm::OneMinusInverse: return "one-minus-inverse";
    }
    return "?";
}

template <class C>
struct BranchExpansion {
    CriticalPoint point = CriticalPoint::Zero;
    ClassTag tag = ClassTag::PowerGeneric;
    Theta<C> theta;           // parameters of the equation the branch solves
    Coefficients<C> coeffs;   // matching (alpha, beta, gamma, delta)
    std::map<std::string, C> constants;  // user constants plus derived values
    C lambda{};               // class exponent of the lattice x^(n + m lambda)
    int order = 0;
    GradedSeries<C> series;   // value (Direct) or denominator (Inverse forms)
    ValueForm form = ValueForm::Direct;
    bool logarithmic = false;          // asymptotic only; evaluation warns
    double predictedResidualOrder = 0; // expected log-log residual slope
    double radius = 0.1;               // heuristic validity radius in |s|
};

// ---------------------------------------------------------------------------
// Oscillatory normal forms:  a x^sigma lattice <-> A sin(i sigma ln x + phi) + B.
// ---------------------------------------------------------------------------

template <class C>
struct SinForm {
    C amplitude;  // A
    C phase;      // phi, normalized to Re phi in (-pi/2, pi/2]
    C offset;     // B
};

// From the lattice constant a (coefficient of x^sigma in the level-1 group) to
// the sinusoidal normal form: a = (A / 2i) e^{i phi}.  phi is complex unless
// |a| = |A|/2.  The (A, phi) -> (-A, phi + pi) freedom is fixed by the window
// Re phi in (-pi/2, pi/2], which leaves a = A/(2i) at phi = 0.
template <class C>
SinForm<C> sinFormFromCoshForm(const C& theta0, const C& thetax, const C& sigma, const C& a) {
    using std::exp;
    using std::log;
    using std::sqrt;
    const C B = coefficientB(theta0, thetax, sigma);
    const C A2 = sinAmplitudeSquared(theta0, thetax, sigma);
    if (absAsDouble(A2) < 1e-14)
        throw DegenerateRadical("sinFormFromCoshForm: amplitude vanishes at this (theta, sigma)");
    C A = sqrt(A2);
    const C i = makeComplex<C>(0.0, 1.0);
    C phi = -i * log(C(2) * i * a / A);
    const double pi = 3.14159265358979323846;
    double re = toDouble(realPart(phi));
    // log is principal, so re is in (-pi, pi]; fold into (-pi/2, pi/2].
    if (re > pi / 2) {
        phi -= piC<C>();
        A = -A;
    } else if (re <= -pi / 2) {
        phi += piC<C>();
        A = -A;
    }
    return {A, phi, B};
}

template <class C>
C coshConstantFromSinForm(const C& amplitude, const C& phase) {
    using std::exp;
    const C i = makeComplex<C>(0.0, 1.0);
    return amplitude / (C(2) * i) * exp(i * phase);
}

// Phase representation of the oscillatory level:  with t = x^sigma and
// E(t) = e^{2 i psi(t)},
//
//   A sin(i sigma ln x + phi) + B = sin^2( (i sigma / 2) ln x + psi(x) ),
//   psi(x) = sum_n psi_n t^n,
//
// where E satisfies  E^2 - [(2-4B) t + 2iA e^{i phi} - 2iA e^{-i phi} t^2] E + t^2 = 0
// with E(0) = 2iA e^{i phi}.  Solving the quadratic as a power series in t and
// taking (1/2i) log produces the psi_n.
template <class C>
struct PhaseForm {
    C sigma;
    PowerSeries<C> psi;  // psi[0] = psi_0
    PowerSeries<C> E;
};

template <class C>
PhaseForm<C> sinSquaredPhase(const SinForm<C>& f, const C& sigma, int order) {
    using std::exp;
    using std::log;
    using std::sqrt;
    const C i = makeComplex<C>(0.0, 1.0);
    const C A = f.amplitude;
    const C E0 = C(2) * i * A * exp(i * f.phase);
    if (absAsDouble(E0) < 1e-14)
        throw DegenerateRadical("sinSquaredPhase: vanishing oscillatory amplitude");

    PowerSeries<C> b(order);
    b[0] = E0;
    if (order >= 1) b[1] = C(2) - C(4) * f.offset;
    if (order >= 2) b[2] = -C(2) * i * A * exp(-i * f.phase);

    // discriminant b^2 - 4 t^2
    PowerSeries<C> disc = b * b;
    if (order >= 2) disc[2] -= C(4);
    PowerSeries<C> root = sqrtSeries(disc);
    C sign = E0 * C(2) - b[0];  // want (b + s*root)/2 = E0 at t=0
    sign = sign / root[0];
    PowerSeries<C> E = (b + root * sign) * makeComplex<C>(0.5);

    // psi = psi0 + (1/2i) log(E / E0)
    PowerSeries<C> ratio = E * (C(1) / E0);
    ratio[0] = C(1);
    PowerSeries<C> lg = logSeries(ratio);
    PowerSeries<C> psi = lg * (C(1) / (C(2) * i));
    psi[0] = log(E0) / (C(2) * i);

    PhaseForm<C> out;
    out.sigma = sigma;
    out.psi = std::move(psi);
    out.E = std::move(E);
    return out;
}

// sin^2((i sigma/2) ln x + psi(x^sigma)) at a point of the universal covering
// given by L = ln x.
template <class C>
C evaluatePhaseForm(const PhaseForm<C>& pf, const C& L) {
    using std::exp;
    using std::sin;
    const C t = exp(pf.sigma * L);
    const C i = makeComplex<C>(0.0, 1.0);
    const C theta = i * pf.sigma / C(2) * L + pf.psi.evaluate(t);
    const C s = sin(theta);
    return s * s;
}

// ---------------------------------------------------------------------------
// Generic level solver.
// ---------------------------------------------------------------------------

namespace detail {

constexpr double kCondTol = 1e-9;   // side-condition and integer-detection tolerance
constexpr double kMergeTol = 1e-9;  // lattice exponents closer than this coincide
constexpr double kPivotTol = 1e-9;  // linear-solve pivot threshold

// ln|ln x| shrinks as |x| grows through the measurement window
// |x| in [1e-4, 1e-3]; a factor ln^l x contributes -0.1249 l to the
// log-log slope there.
constexpr double kLogSlopePerDegree = 0.1249;

template <class C>
C exponentOf(const GradedKey& k, const C& lambda) {
    return C(k.n) + C(k.m) * lambda;
}

template <class C>
bool nearInteger(const C& z, long& out) {
    const double re = toDouble(realPart(z));
    const double im = toDouble(imagPart(z));
    if (std::abs(im) > kCondTol) return false;
    const double r = std::round(re);
    if (std::abs(re - r) > kCondTol) return false;
    out = static_cast<long>(r);
    return true;
}

template <class C>
struct ClassPlan {
    C lambda{};
    Coefficients<C> cf{};                 // equation actually swept
    std::map<GradedKey, C> seeds;
    std::map<GradedKey, C> guesses;       // Newton starting values for select slots
    int nMin = 1;
    bool logs = false;
    std::function<void(int, std::vector<GradedKey>&)> slots;
    const char* what = "expandBranch";
};

// Image of the unit monomial x^(n + m lambda) ln^l x under the linearized
// residual operator.
template <class C>
GradedSeries<C> linearImage(const ResidualParts<C>& parts, const GradedKey& u, const C& lambda) {
    const C e = exponentOf(u, lambda);
    GradedSeries<C> img = parts.dY.shifted(u, C(1));
    img += parts.dYp.shifted({u.n - 1, u.m, u.l}, e);
    if (u.l > 0) img += parts.dYp.shifted({u.n - 1, u.m, u.l - 1}, C(u.l));
    img += parts.dYpp.shifted({u.n - 2, u.m, u.l}, e * (e - C(1)));
    if (u.l > 0) img += parts.dYpp.shifted({u.n - 2, u.m, u.l - 1}, C(u.l) * (C(2) * e - C(1)));
    if (u.l > 1) img += parts.dYpp.shifted({u.n - 2, u.m, u.l - 2}, C(u.l) * C(u.l - 1));
    return img;
}

template <class C>
struct SolveOutcome {
    GradedSeries<C> series;
    double residualOrder = 0;  // predicted log-log slope of the pointwise residual
    int rowsDone = 0;
};

template <class C>
SolveOutcome<C> solveLevels(const ClassPlan<C>& plan, int order) {
    const int shiftCap = 6;
    GradedCaps caps;
    caps.maxN = order + shiftCap + 2;
    caps.maxM = caps.maxN + 2;
    caps.maxL = plan.logs ? 2 * order + 6 : 2;

    GradedSeries<C> y(plan.lambda, caps);
    for (const auto& [k, v] : plan.seeds) y.insert(k, v);

    const double ctol = std::pow(10.0, -0.55 * ScalarTraits<C>::digits10);

    // Registry of slot/seed exponents: a collision inside the lattice means the
    // class parametrization itself degenerates.
    std::vector<std::pair<C, int>> registry;
    auto registerExponent = [&](const GradedKey& k) {
        const C e = exponentOf(k, plan.lambda);
        for (const auto& [eo, lo] : registry) {
            if (lo == k.l && absAsDouble(e - eo) < kMergeTol)
                throw ResonanceError(std::string(plan.what) +
                                     ": lattice exponents collide (resonant class exponent)");
        }
        registry.emplace_back(e, k.l);
    };
    for (const auto& [k, v] : plan.seeds) registerExponent(k);

    int maxRowDone = std::numeric_limits<int>::min() / 2;
    std::vector<GradedKey> carried;

    for (int n = plan.nMin; n <= order; ++n) {
        std::vector<GradedKey> slotKeys;
        plan.slots(n, slotKeys);
        std::vector<GradedKey> candidates = carried;
        carried.clear();
        for (const auto& k : slotKeys)
            if (!plan.seeds.count(k)) {
                registerExponent(k);
                candidates.push_back(k);
                auto g = plan.guesses.find(k);
                if (g != plan.guesses.end()) y.insert(k, g->second);
            }

        ResidualParts<C> parts = residualOnSeries(y, plan.cf, true);

        struct Column {
            GradedKey key;
            int minLv;
        };
        std::vector<Column> cols;
        cols.reserve(candidates.size());
        for (const auto& u : candidates) {
            GradedSeries<C> img = linearImage(parts, u, plan.lambda);
            cols.push_back({u, img.empty() ? std::numeric_limits<int>::max() : img.minLevel()});
        }

        int sn = std::numeric_limits<int>::max();
        for (const auto& c : cols) sn = std::min(sn, c.minLv);
        if (cols.empty()) {
            if (slotKeys.empty()) continue;
            GradedSeries<C> probe = linearImage(parts, slotKeys.front(), plan.lambda);
            if (probe.empty()) continue;
            sn = probe.minLevel();
        }
        if (sn == std::numeric_limits<int>::max()) {
            for (const auto& c : cols) carried.push_back(c.key);
            continue;
        }

        // Residual keys strictly between the last solved row level and sn can
        // no longer be cancelled by anything: they must already vanish.
        double rscale = 1.0;
        for (const auto& [k, c] : parts.value.terms())
            if (k.n <= sn) rscale = std::max(rscale, absAsDouble(c));
        const double tolRow = 100 * ctol * rscale;
        for (const auto& [k, c] : parts.value.terms()) {
            if (k.n <= maxRowDone || k.n >= sn) continue;
            if (absAsDouble(c) <= tolRow) continue;
            // Distinguish a genuine obstruction from a cross-level exponent
            // collision (two keys at different n with the same exponent).
            const C e = exponentOf(k, plan.lambda);
            for (const auto& [k2, c2] : parts.value.terms()) {
                if (k2.n <= k.n || k2.l != k.l) continue;
                if (absAsDouble(exponentOf(k2, plan.lambda) - e) < kMergeTol)
                    throw ResonanceError(std::string(plan.what) +
                                         ": lattice exponents collide across levels");
            }
            throw ConditionViolation(
                std::string(plan.what) + ": obstruction at lattice point (n=" +
                std::to_string(k.n) + ", m=" + std::to_string(k.m) + ", l=" + std::to_string(k.l) +
                "): no admissible slot can cancel it (a different class applies here)");
        }

        std::vector<GradedKey> active;
        for (const auto& c : cols) {
            if (c.minLv == sn)
                active.push_back(c.key);
            else
                carried.push_back(c.key);
        }

        struct Row {
            C e;
            int l;
        };

        if (active.empty()) {
            // Purely a consistency level: rows at sn must vanish by themselves
            // (the nonlinear interplay of the seeded terms is captured exactly
            // because the residual is computed on the full current series).
            for (const auto& [k, c] : parts.value.terms())
                if (k.n == sn && absAsDouble(c) > tolRow)
                    throw ConditionViolation(std::string(plan.what) +
                                             ": obstruction at fully seeded level n=" +
                                             std::to_string(n) +
                                             " (leading-term formulas do not satisfy the "
                                             "equation at these parameters)");
            maxRowDone = sn;
            continue;
        }

        // The level system is linear in the unknown slots whenever their
        // mutual products land above sn, but the first level of the power
        // lattices self-interacts (x-weighted quadratic terms of the equation
        // pull same-level products back down).  Newton iteration on the same
        // linearized machinery covers both: linear levels converge in one
        // step, nonlinear ones quadratically.
        bool converged = false;
        for (int iter = 0; iter < 8; ++iter) {
            if (iter > 0) parts = residualOnSeries(y, plan.cf, true);

            std::vector<Row> rows;
            auto rowIndex = [&](const GradedKey& k) -> int {
                const C e = exponentOf(k, plan.lambda);
                for (size_t i = 0; i < rows.size(); ++i)
                    if (rows[i].l == k.l && absAsDouble(rows[i].e - e) < kMergeTol)
                        return static_cast<int>(i);
                rows.push_back({e, k.l});
                return static_cast<int>(rows.size()) - 1;
            };
            std::vector<C> b;
            auto ensureRow = [&](int idx) {
                while (static_cast<int>(b.size()) <= idx) b.push_back(C(0));
            };
            double bmax = 0.0;
            for (const auto& [k, c] : parts.value.terms())
                if (k.n == sn) {
                    const int r = rowIndex(k);
                    ensureRow(r);
                    b[r] -= c;
                }
            for (const C& v : b) bmax = std::max(bmax, absAsDouble(v));
            if (bmax <= tolRow) {
                converged = true;
                break;
            }

            std::vector<GradedSeries<C>> imgs;
            imgs.reserve(active.size());
            for (const auto& u : active) {
                imgs.push_back(linearImage(parts, u, plan.lambda));
                for (const auto& [k, c] : imgs.back().terms())
                    if (k.n == sn) ensureRow(rowIndex(k));
            }
            const size_t nr = rows.size();
            const size_t nc = active.size();
            std::vector<std::vector<C>> a(nr, std::vector<C>(nc, C(0)));
            for (size_t j = 0; j < nc; ++j)
                for (const auto& [k, c] : imgs[j].terms())
                    if (k.n == sn) a[rowIndex(k)][j] += c;

            // Row equilibration keeps the fixed pivot threshold meaningful.
            for (size_t i = 0; i < nr; ++i) {
                double mx = absAsDouble(b[i]);
                for (size_t j = 0; j < nc; ++j) mx = std::max(mx, absAsDouble(a[i][j]));
                if (mx > 0) {
                    const C f = makeComplex<C>(1.0 / mx);
                    for (size_t j = 0; j < nc; ++j) a[i][j] *= f;
                    b[i] *= f;
                }
            }
            LinearSolveResult<C> sol = solveDense(a, b, kPivotTol, plan.what);
            for (size_t j = 0; j < nc; ++j) y.insert(active[j], sol.x[j]);
        }
        if (!converged)
            throw ConditionViolation(std::string(plan.what) + ": level-" + std::to_string(n) +
                                     " system did not close (resonant obstruction or "
                                     "inconsistent leading data)");
        maxRowDone = sn;
    }

    if (!carried.empty())
        throw ResonanceError(std::string(plan.what) +
                             ": some lattice slots remain undetermined at the requested order");

    // Final residual: everything at or below the last equation level must be
    // clean; what remains above it predicts the pointwise decay rate.
    const ResidualParts<C> fin = residualOnSeries(y, plan.cf, false);
    double scale = 1.0;
    for (const auto& [k, c] : fin.value.terms()) scale = std::max(scale, absAsDouble(c));
    double predicted = std::numeric_limits<double>::infinity();
    for (const auto& [k, c] : fin.value.terms()) {
        if (absAsDouble(c) <= 100 * ctol * scale) continue;
        if (k.n <= maxRowDone)
            throw ResonanceError(std::string(plan.what) +
                                 ": residual persists below the solved levels (internal)");
        const double slope = toDouble(realPart(exponentOf(k, plan.lambda))) -
                             kLogSlopePerDegree * k.l;
        predicted = std::min(predicted, slope);
    }
    if (!std::isfinite(predicted)) predicted = maxRowDone + 1;

    SolveOutcome<C> out;
    out.series = std::move(y);
    out.residualOrder = predicted;
    out.rowsDone = maxRowDone;
    return out;
}

// --- constant handling ------------------------------------------------------

template <class C>
const C& getConstant(const std::map<std::string, C>& m, const std::string& name, const char* tag) {
    auto it = m.find(name);
    if (it == m.end())
        throw Error("MissingConstant",
                    std::string(tag) + " requires the constant '" + name + "'");
    return it->second;
}

template <class C>
long getSelector(const std::map<std::string, C>& m, const std::string& name, long dflt,
                 const char* tag) {
    auto it = m.find(name);
    if (it == m.end()) return dflt;
    long v = 0;
    if (!nearInteger(it->second, v))
        throw Error("BadConstant", std::string(tag) + ": constant '" + name +
                                       "' must be a small integer");
    return v;
}

// --- slot enumerators -------------------------------------------------------

inline std::function<void(int, std::vector<GradedKey>&)> slotsFullWedge() {
    return [](int n, std::vector<GradedKey>& out) {
        for (int m = -n; m <= n; ++m) out.push_back({n, m, 0});
    };
}

inline std::function<void(int, std::vector<GradedKey>&)> slotsLowerWedge() {
    return [](int n, std::vector<GradedKey>& out) {
        for (int m = -n; m <= 0; ++m) out.push_back({n, m, 0});
    };
}

inline std::function<void(int, std::vector<GradedKey>&)> slotsUpperWedge() {
    return [](int n, std::vector<GradedKey>& out) {
        for (int m = 0; m <= n; ++m) out.push_back({n, m, 0});
    };
}

inline std::function<void(int, std::vector<GradedKey>&)> slotsNegOmega() {
    return [](int n, std::vector<GradedKey>& out) {
        for (int m = -1; m <= n - 1; ++m) out.push_back({n, m, 0});
    };
}

inline std::function<void(int, std::vector<GradedKey>&)> slotsTaylor() {
    return [](int n, std::vector<GradedKey>& out) { out.push_back({n, 0, 0}); };
}

// Logarithmic lattice: l <= n+1 once logs may appear; before the level
// firstLog only plain powers; at firstLog only l <= 1 (the slot that absorbs
// the resonant obstruction).
inline std::function<void(int, std::vector<GradedKey>&)> slotsLog(int firstLog) {
    return [firstLog](int n, std::vector<GradedKey>& out) {
        int lmax;
        if (n < firstLog)
            lmax = 0;
        else if (n == firstLog)
            lmax = 1;
        else
            lmax = n + 1;
        for (int l = 0; l <= lmax; ++l) out.push_back({n, 0, l});
    };
}

// Second-kind logarithmic lattice: the seed level carries ln^2, and the level-n
// fiber is a polynomial of degree 2n in ln x.
inline std::function<void(int, std::vector<GradedKey>&)> slotsLogQuadratic(int seedLevel) {
    return [seedLevel](int n, std::vector<GradedKey>& out) {
        const int lmax = (n == seedLevel) ? 2 : 2 * n;
        for (int l = 0; l <= lmax; ++l) out.push_back({n, 0, l});
    };
}

// --- shared plan builders ---------------------------------------------------

// Direct power-lattice sweep with leading term seed*x^(1-sigma).  Used by
// PowerGeneric itself and, on the x/y-transformed parameters, by the inverse
// oscillatory classes.
template <class C>
ClassPlan<C> planPowerLattice(const Theta<C>& th, const C& sigma, const C& seed,
                              std::function<void(int, std::vector<GradedKey>&)> slots,
                              const char* what) {
    if (absAsDouble(sigma) < kCondTol)
        throw ConditionViolation(std::string(what) + ": sigma must be nonzero");
    if (absAsDouble(seed) == 0.0)
        throw ConditionViolation(std::string(what) + ": integration constant a must be nonzero");
    ClassPlan<C> plan;
    plan.lambda = sigma;
    plan.cf = coefficientsFromTheta(th);
    plan.seeds[{1, -1, 0}] = seed;
    // The level-1 group solves a quadratic system; start Newton at the
    // closed-form values (offset B and amplitude relation a * c_{1,+1} = A^2/4)
    // so the iteration cannot stall on a singular first linearization.
    plan.guesses[{1, 0, 0}] = coefficientB(th.t0, th.tx, sigma);
    plan.guesses[{1, 1, 0}] = sinAmplitudeSquared(th.t0, th.tx, sigma) / (C(4) * seed);
    plan.nMin = 1;
    plan.slots = std::move(slots);
    plan.what = what;
    return plan;
}

// Logarithmic sweep of the first kind on given parameters: lattice x^n ln^l x,
// N = u + (-)^k v resonance index where u = sqrt(-2 beta), v = sqrt(1-2 delta).
template <class C>
ClassPlan<C> planLogFirstKind(const Theta<C>& th, long k, const C& a, long sign, long& nOut,
                              const char* what) {
    using std::sqrt;
    const Coefficients<C> cf = coefficientsFromTheta(th);
    const C u = sqrt(-C(2) * cf.beta);
    const C v = sqrt(C(1) - C(2) * cf.delta);
    const C comb = u + (k % 2 == 0 ? v : -v);
    long N = 0;
    if (!nearInteger(comb, N))
        throw ConditionViolation(std::string(what) +
                                 ": sqrt(-2 beta) + (-)^k sqrt(1-2 delta) is not an integer");
    nOut = N;
    ClassPlan<C> plan;
    plan.lambda = C(0);
    plan.cf = cf;
    plan.logs = true;
    plan.nMin = 1;
    plan.what = what;
    if (N == 0) {
        if (absAsDouble(u) < kCondTol)
            throw ConditionViolation(std::string(what) +
                                     ": theta0 = thetax = 0 has no logarithmic branch here");
        plan.seeds[{1, 0, 0}] = a;
        plan.seeds[{1, 0, 1}] = (sign >= 0 ? u : -u);
        plan.slots = slotsLog(1);
    } else {
        const long absN = std::labs(N);
        plan.seeds[{1, 0, 0}] = u / comb;
        plan.seeds[{static_cast<int>(absN) + 1, 0, 0}] = a;
        plan.slots = slotsLog(static_cast<int>(absN) + 1);
    }
    return plan;
}

// Logarithmic sweep of the second kind:  y = [(q/4)(a + ln x)^2 + 2 beta/q] x + ...
// with q = 2 beta + 1 - 2 delta != 0.
template <class C>
ClassPlan<C> planLogSecondKind(const Theta<C>& th, const C& a, const char* what) {
    const Coefficients<C> cf = coefficientsFromTheta(th);
    const C q = C(2) * cf.beta + C(1) - C(2) * cf.delta;
    if (absAsDouble(q) < kCondTol)
        throw ConditionViolation(std::string(what) + ": requires 2 beta != 2 delta - 1");
    ClassPlan<C> plan;
    plan.lambda = C(0);
    plan.cf = cf;
    plan.logs = true;
    plan.nMin = 1;
    plan.what = what;
    plan.seeds[{1, 0, 2}] = q / C(4);
    plan.seeds[{1, 0, 1}] = q / C(2) * a;
    plan.seeds[{1, 0, 0}] = q / C(4) * a * a + C(2) * cf.beta / q;
    plan.slots = slotsLogQuadratic(1);
    return plan;
}

} // namespace detail

// ---------------------------------------------------------------------------
// expandBranch: the sixteen classes.
// ---------------------------------------------------------------------------

template <class C>
BranchExpansion<C> expandBranch(ClassTag tag, const std::map<std::string, C>& constants,
                                const Theta<C>& theta, int order) {
    using std::exp;
    using std::sqrt;
    using detail::kCondTol;
    const char* what = classTagName(tag);
    const Coefficients<C> cf = coefficientsFromTheta(theta);
    const C i = makeComplex<C>(0.0, 1.0);

    BranchExpansion<C> b;
    b.tag = tag;
    b.point = CriticalPoint::Zero;
    b.theta = theta;
    b.coeffs = cf;
    b.constants = constants;

    // The inverse classes sweep the x/y-transformed equation; y = x / Y maps
    // solutions to solutions, and the cleared residuals obey
    // R(x, x/Y, ...) = -(x^3 / Y^6) R'(x, Y, ...), so the pointwise decay of
    // the target residual sits 3 below that of the internal sweep (plus
    // +6*0.1249 per ln-degree of the leading denominator level inside the
    // measurement window).
    const Theta<C> thetaSwap = applyToTheta(SymmetryOp::SwapXY, theta);

    auto finishDirect = [&](detail::SolveOutcome<C>&& out, const C& lambda, int effOrder) {
        b.lambda = lambda;
        b.order = effOrder;
        b.series = std::move(out.series);
        b.form = ValueForm::Direct;
        b.predictedResidualOrder = out.residualOrder;
        return b;
    };
    auto finishInverse = [&](detail::SolveOutcome<C>&& out, const C& lambda, int effOrder,
                             int denomLogDegree) {
        b.lambda = lambda;
        b.order = effOrder;
        b.series = out.series.shifted({-1, 0, 0}, C(1));
        b.form = ValueForm::Inverse;
        b.predictedResidualOrder =
            out.residualOrder - 3.0 + 6.0 * detail::kLogSlopePerDegree * denomLogDegree;
        return b;
    };

    switch (tag) {
        case ClassTag::PowerGeneric: {
            const C sigma = detail::getConstant(constants, "sigma", what);
            const C a = detail::getConstant(constants, "a", what);
            const double re = toDouble(realPart(sigma));
            if (re < 0.0 || re >= 1.0)
                throw ConditionViolation("PowerGeneric: Re sigma must lie in [0, 1)");
            auto plan = detail::planPowerLattice(theta, sigma, a, detail::slotsFullWedge(), what);
            return finishDirect(detail::solveLevels(plan, order), sigma, order);
        }

        case ClassTag::PowerRho: {
            const C a = detail::getConstant(constants, "a", what);
            const long k = detail::getSelector(constants, "branch", 0, what);
            if (absAsDouble(cf.alpha) < kCondTol)
                throw ConditionViolation("PowerRho: requires alpha != 0");
            const C w1 = sqrt(C(2) * cf.alpha);
            const C w2 = sqrt(C(2) * cf.gamma);
            const C sa = sqrt(cf.alpha);
            const C sg = sqrt(cf.gamma);
            C rho1 = w1 + (k % 2 == 0 ? w2 : -w2);  // rho + 1 up to overall sign
            if (absAsDouble(rho1) < kCondTol)
                throw ConditionViolation("PowerRho: rho + 1 vanishes for this branch");
            const double rr = toDouble(realPart(rho1));
            const double ri = toDouble(imagPart(rho1));
            if (std::abs(rr) < kCondTol)
                throw ConditionViolation("PowerRho: rho + 1 is purely imaginary (oscillatory)");
            if (rr < 0 || (std::abs(rr) < kCondTol && ri < 0)) rho1 = -rho1;
            const C rho = rho1 - C(1);
            long dummy = 0;
            if (detail::nearInteger(rho, dummy))
                throw ConditionViolation("PowerRho: rho must not be an integer");
            const C c0 = (sa + (k % 2 == 0 ? sg : -sg)) / sa;

            detail::ClassPlan<C> plan;
            plan.lambda = rho;
            plan.cf = cf;
            plan.nMin = 0;
            plan.what = what;
            plan.seeds[{0, 0, 0}] = c0;
            plan.seeds[{1, 1, 0}] = a;
            plan.slots = detail::slotsUpperWedge();
            auto out = detail::solveLevels(plan, order);
            b.constants["rho"] = rho;
            b.constants["c0"] = c0;
            return finishDirect(std::move(out), rho, order);
        }

        case ClassTag::PowerNegOmega: {
            const C a = detail::getConstant(constants, "a", what);
            if (absAsDouble(cf.alpha) > kCondTol)
                throw ConditionViolation("PowerNegOmega: requires alpha = 0");
            if (absAsDouble(a) == 0.0)
                throw ConditionViolation("PowerNegOmega: constant a must be nonzero");
            C omega = sqrt(C(2) * cf.gamma);
            if (absAsDouble(omega) < kCondTol)
                throw ConditionViolation("PowerNegOmega: requires gamma != 0");
            const double ro = toDouble(realPart(omega));
            if (std::abs(ro) < kCondTol)
                throw ConditionViolation("PowerNegOmega: omega is purely imaginary (oscillatory)");
            if (ro < 0) omega = -omega;

            detail::ClassPlan<C> plan;
            plan.lambda = omega;
            plan.cf = cf;
            plan.nMin = 0;
            plan.what = what;
            plan.seeds[{0, -1, 0}] = C(1) / a;
            plan.slots = detail::slotsNegOmega();
            auto out = detail::solveLevels(plan, order);
            b.constants["omega"] = omega;
            return finishDirect(std::move(out), omega, order);
        }

        case ClassTag::InvOscNuPhi: {
            const C nu = detail::getConstant(constants, "nu", what);
            const C phi = detail::getConstant(constants, "phi", what);
            if (std::abs(toDouble(imagPart(nu))) > kCondTol || absAsDouble(nu) < kCondTol)
                throw ConditionViolation("InvOscNuPhi: nu must be real and nonzero");
            // Leading denominator A sin(2 nu ln x + phi) + B with the
            // tabulated A, B in the original (alpha, gamma).
            const C nu2 = nu * nu;
            const C B = (C(2) * nu2 + cf.gamma - cf.alpha) / (C(4) * nu2);
            const C A = -sqrt(cf.alpha / (C(2) * nu2) + B * B);
            const C sigma = -C(2) * i * nu;         // lattice exponent of the sweep
            const C seed = A / (C(2) * i) * exp(i * phi);
            auto plan = detail::planPowerLattice(thetaSwap, sigma, seed,
                                                 detail::slotsFullWedge(), what);
            auto out = detail::solveLevels(plan, order + 1);
            b.constants["A"] = A;
            b.constants["B"] = B;
            return finishInverse(std::move(out), sigma, order, 0);
        }

        case ClassTag::InvOscA: {
            const C a = detail::getConstant(constants, "a", what);
            const long sel = detail::getSelector(constants, "branch", 0, what);
            const C w1 = sqrt(C(2) * cf.alpha);
            const C w2 = sqrt(C(2) * cf.gamma);
            const C mu = ((sel & 2) ? -C(1) : C(1)) * (w1 + ((sel & 1) ? -w2 : w2));
            if (std::abs(toDouble(realPart(mu))) > kCondTol || absAsDouble(mu) < kCondTol)
                throw ConditionViolation(
                    "InvOscA: sqrt(2 alpha) +- sqrt(2 gamma) must be purely imaginary nonzero");
            auto plan = detail::planPowerLattice(thetaSwap, mu, a, detail::slotsLowerWedge(), what);
            auto out = detail::solveLevels(plan, order + 1);
            b.constants["nu"] = mu / (C(2) * i);
            return finishInverse(std::move(out), mu, order, 0);
        }

        case ClassTag::TaylorRow1: {
            const long k = detail::getSelector(constants, "branch", 0, what);
            const C u = sqrt(-C(2) * cf.beta);
            const C v = sqrt(C(1) - C(2) * cf.delta);
            long n1 = 0;
            if (detail::nearInteger(u + v, n1) || detail::nearInteger(u - v, n1))
                throw ConditionViolation(
                    "TaylorRow1: sqrt(-2 beta) +- sqrt(1-2 delta) must not be an integer");
            const C den = u + (k % 2 == 0 ? v : -v);
            if (absAsDouble(den) < kCondTol)
                throw ConditionViolation("TaylorRow1: leading denominator vanishes");
            const C b1 = u / den;

            detail::ClassPlan<C> plan;
            plan.lambda = C(0);
            plan.cf = cf;
            plan.nMin = 1;
            plan.what = what;
            plan.seeds[{1, 0, 0}] = b1;
            plan.slots = detail::slotsTaylor();
            auto out = detail::solveLevels(plan, order);
            b.constants["b1"] = b1;
            return finishDirect(std::move(out), C(0), order);
        }

        case ClassTag::TaylorRow2: {
            const C a = detail::getConstant(constants, "a", what);
            const long k = detail::getSelector(constants, "branch", 0, what);
            const C u = sqrt(-C(2) * cf.beta);
            const C v = sqrt(C(1) - C(2) * cf.delta);
            const C comb = u + (k % 2 == 0 ? v : -v);
            long N = 0;
            if (!detail::nearInteger(comb, N) || N == 0)
                throw ConditionViolation(
                    "TaylorRow2: sqrt(-2 beta) + (-)^k sqrt(1-2 delta) must be a nonzero integer");
            detail::ClassPlan<C> plan;
            plan.lambda = C(0);
            plan.cf = cf;
            plan.nMin = 1;
            plan.what = what;
            plan.seeds[{1, 0, 0}] = u / comb;
            plan.seeds[{static_cast<int>(std::labs(N)) + 1, 0, 0}] = a;
            plan.slots = detail::slotsTaylor();
            auto out = detail::solveLevels(plan, order);
            b.constants["N"] = C(static_cast<double>(N));
            return finishDirect(std::move(out), C(0), order);
        }

        case ClassTag::TaylorRow3: {
            const long k = detail::getSelector(constants, "branch", 0, what);
            if (absAsDouble(cf.alpha) < kCondTol)
                throw ConditionViolation("TaylorRow3: requires alpha != 0");
            const C w1 = sqrt(C(2) * cf.alpha);
            const C w2 = sqrt(C(2) * cf.gamma);
            const C comb = w1 + (k % 2 == 0 ? w2 : -w2);
            long N = 0;
            if (detail::nearInteger(comb, N))
                throw ConditionViolation(
                    "TaylorRow3: sqrt(2 alpha) + (-)^k sqrt(2 gamma) must not be an integer");
            const C c0 = (sqrt(cf.alpha) + (k % 2 == 0 ? sqrt(cf.gamma) : -sqrt(cf.gamma))) /
                         sqrt(cf.alpha);
            detail::ClassPlan<C> plan;
            plan.lambda = C(0);
            plan.cf = cf;
            plan.nMin = 0;
            plan.what = what;
            plan.seeds[{0, 0, 0}] = c0;
            plan.slots = detail::slotsTaylor();
            auto out = detail::solveLevels(plan, order);
            b.constants["c0"] = c0;
            return finishDirect(std::move(out), C(0), order);
        }

        case ClassTag::TaylorRow4: {
            const C a = detail::getConstant(constants, "a", what);
            const long k = detail::getSelector(constants, "branch", 0, what);
            if (absAsDouble(cf.alpha) < kCondTol)
                throw ConditionViolation("TaylorRow4: requires alpha != 0");
            const C w1 = sqrt(C(2) * cf.alpha);
            const C w2 = sqrt(C(2) * cf.gamma);
            const C comb = w1 + (k % 2 == 0 ? w2 : -w2);
            long N = 0;
            if (!detail::nearInteger(comb, N) || N == 0)
                throw ConditionViolation(
                    "TaylorRow4: sqrt(2 alpha) + (-)^k sqrt(2 gamma) must be a nonzero integer");
            const C c0 = (sqrt(cf.alpha) + (k % 2 == 0 ? sqrt(cf.gamma) : -sqrt(cf.gamma))) /
                         sqrt(cf.alpha);
            detail::ClassPlan<C> plan;
            plan.lambda = C(0);
            plan.cf = cf;
            plan.nMin = 0;
            plan.what = what;
            plan.seeds[{0, 0, 0}] = c0;
            plan.seeds[{static_cast<int>(std::labs(N)), 0, 0}] = a;
            plan.slots = detail::slotsTaylor();
            auto out = detail::solveLevels(plan, order);
            b.constants["N"] = C(static_cast<double>(N));
            b.constants["c0"] = c0;
            return finishDirect(std::move(out), C(0), order);
        }

        case ClassTag::TaylorRow5: {
            const C a = detail::getConstant(constants, "a", what);
            if (absAsDouble(cf.alpha) > kCondTol || absAsDouble(cf.gamma) > kCondTol)
                throw ConditionViolation("TaylorRow5: requires alpha = gamma = 0");
            detail::ClassPlan<C> plan;
            plan.lambda = C(0);
            plan.cf = cf;
            plan.nMin = 0;
            plan.what = what;
            plan.seeds[{0, 0, 0}] = a;
            plan.slots = detail::slotsTaylor();
            return finishDirect(detail::solveLevels(plan, order), C(0), order);
        }

        case ClassTag::TaylorRow6: {
            const C a = detail::getConstant(constants, "a", what);
            if (absAsDouble(cf.beta) > kCondTol ||
                absAsDouble(C(2) * cf.delta - C(1)) > kCondTol)
                throw ConditionViolation("TaylorRow6: requires beta = 0 and delta = 1/2");
            detail::ClassPlan<C> plan;
            plan.lambda = C(0);
            plan.cf = cf;
            plan.nMin = 1;
            plan.what = what;
            plan.seeds[{1, 0, 0}] = a;
            plan.slots = detail::slotsTaylor();
            return finishDirect(detail::solveLevels(plan, order), C(0), order);
        }

        case ClassTag::LogRow1: {
            const C a = detail::getConstant(constants, "a", what);
            const long k = detail::getSelector(constants, "branch", 0, what);
            const long sign = detail::getSelector(constants, "sign", +1, what);
            long N = 0;
            auto plan = detail::planLogFirstKind(theta, k, a, sign, N, what);
            auto out = detail::solveLevels(plan, order);
            b.constants["N"] = C(static_cast<double>(N));
            b.logarithmic = true;
            return finishDirect(std::move(out), C(0), order);
        }

        case ClassTag::LogRow2: {
            const C a = detail::getConstant(constants, "a", what);
            auto plan = detail::planLogSecondKind(theta, a, what);
            auto out = detail::solveLevels(plan, order);
            b.logarithmic = true;
            return finishDirect(std::move(out), C(0), order);
        }

        case ClassTag::LogRow3: {
            const C a = detail::getConstant(constants, "a", what);
            const long k = detail::getSelector(constants, "branch", 0, what);
            if (absAsDouble(cf.alpha) < kCondTol)
                throw ConditionViolation("LogRow3: requires alpha != 0");
            const C w1 = sqrt(C(2) * cf.alpha);
            const C w2 = sqrt(C(2) * cf.gamma);
            const C comb = w1 + (k % 2 == 0 ? w2 : -w2);
            long N = 0;
            if (!detail::nearInteger(comb, N) || N == 0)
                throw ConditionViolation(
                    "LogRow3: sqrt(2 alpha) + (-)^k sqrt(2 gamma) must be a nonzero integer");
            const C c0 = (sqrt(cf.alpha) + (k % 2 == 0 ? sqrt(cf.gamma) : -sqrt(cf.gamma))) /
                         sqrt(cf.alpha);
            detail::ClassPlan<C> plan;
            plan.lambda = C(0);
            plan.cf = cf;
            plan.logs = true;
            plan.nMin = 0;
            plan.what = what;
            plan.seeds[{0, 0, 0}] = c0;
            plan.seeds[{static_cast<int>(std::labs(N)), 0, 0}] = a;
            plan.slots = detail::slotsLog(static_cast<int>(std::labs(N)));
            auto out = detail::solveLevels(plan, order);
            b.constants["N"] = C(static_cast<double>(N));
            b.constants["c0"] = c0;
            b.logarithmic = true;
            return finishDirect(std::move(out), C(0), order);
        }

        case ClassTag::InvLogRow1: {
            const C a = detail::getConstant(constants, "a", what);
            const long sign = detail::getSelector(constants, "sign", +1, what);
            if (absAsDouble(cf.alpha - cf.gamma) > kCondTol || absAsDouble(cf.alpha) < kCondTol)
                throw ConditionViolation("InvLogRow1: requires alpha = gamma != 0");
            long N = 0;
            // On the transformed parameters the two square roots coincide, so
            // the k = 1 combination gives the N = 0 logarithmic branch.
            auto plan = detail::planLogFirstKind(thetaSwap, 1, a, sign, N, what);
            auto out = detail::solveLevels(plan, order + 1);
            b.logarithmic = true;
            return finishInverse(std::move(out), C(0), order, 1);
        }

        case ClassTag::InvLogRow2: {
            const C a = detail::getConstant(constants, "a", what);
            if (absAsDouble(cf.alpha - cf.gamma) < kCondTol)
                throw ConditionViolation("InvLogRow2: requires alpha != gamma");
            auto plan = detail::planLogSecondKind(thetaSwap, a, what);
            auto out = detail::solveLevels(plan, order + 1);
            b.logarithmic = true;
            return finishInverse(std::move(out), C(0), order, 2);
        }
    }
    throw Error("UnknownClass", "expandBranch: unhandled class tag");
}

// ---------------------------------------------------------------------------
// Transport between critical points.
// ---------------------------------------------------------------------------

// Permute01 carries x = 0 expansions to x = 1 (local variable s = 1 - x,
// value map y -> 1 - y); InvertX carries x = 0 to x = infinity (s = 1/x,
// y -> y/x as a function of s); SwapXY stays at x = 0 and maps y -> x/y.
template <class C>
BranchExpansion<C> transportExpansion(SymmetryOp op, const BranchExpansion<C>& src) {
    BranchExpansion<C> out = src;
    out.theta = applyToTheta(op, src.theta);
    out.coeffs = coefficientsFromTheta(out.theta);
    switch (op) {
        case SymmetryOp::Permute01: {
            if (src.point == CriticalPoint::Infinity)
                throw Error("UnsupportedTransport",
                            "Permute01 transport acts between x=0 and x=1 expansions");
            out.point = (src.point == CriticalPoint::Zero) ? CriticalPoint::One
                                                           : CriticalPoint::Zero;
            switch (src.form) {
                case ValueForm::Direct: {
                    out.series = -src.series;
                    out.series.insert({0, 0, 0}, C(1));
                    break;
                }
                case ValueForm::Inverse:
                    out.form = ValueForm::OneMinusInverse;
                    break;
                case ValueForm::OneMinusInverse:
                    out.form = ValueForm::Inverse;
                    break;
            }
            return out;
        }
        case SymmetryOp::InvertX: {
            if (src.point == CriticalPoint::One)
                throw Error("UnsupportedTransport",
                            "InvertX transport acts between x=0 and x=infinity expansions");
            out.point = (src.point == CriticalPoint::Zero) ? CriticalPoint::Infinity
                                                           : CriticalPoint::Zero;
            // y(x) -> y(x)/x reads as a shift by -1 in the shared local
            // coordinate when leaving x=0 and by +1 when coming back, because
            // the local coordinate at infinity is 1/x.
            const int drop = (src.point == CriticalPoint::Zero) ? -1 : +1;
            switch (src.form) {
                case ValueForm::Direct:
                    out.series = src.series.shifted({drop, 0, 0}, C(1));
                    break;
                case ValueForm::Inverse:
                    out.series = src.series.shifted({-drop, 0, 0}, C(1));
                    break;
                case ValueForm::OneMinusInverse:
                    throw Error("UnsupportedTransport",
                                "InvertX cannot be applied to a one-minus-inverse form");
            }
            return out;
        }
        case SymmetryOp::SwapXY: {
            if (src.point != CriticalPoint::Zero)
                throw Error("UnsupportedTransport", "SwapXY transport is defined at x=0");
            if (src.series.empty())
                throw ReciprocalOfZeroSeries("SwapXY transport of an identically zero series");
            switch (src.form) {
                case ValueForm::Direct:
                    out.form = ValueForm::Inverse;
                    out.series = src.series.shifted({-1, 0, 0}, C(1));
                    out.predictedResidualOrder = src.predictedResidualOrder - 3.0;
                    break;
                case ValueForm::Inverse:
                    out.form = ValueForm::Direct;
                    out.series = src.series.shifted({+1, 0, 0}, C(1));
                    out.predictedResidualOrder = src.predictedResidualOrder + 3.0;
                    break;
                case ValueForm::OneMinusInverse:
                    throw Error("UnsupportedTransport",
                                "SwapXY cannot be applied to a one-minus-inverse form");
            }
            return out;
        }
    }
    throw Error("UnsupportedTransport", "transportExpansion: unhandled operation");
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

template <class C>
struct BranchValue {
    C value{};
    double errorEstimate = 0;      // magnitude of the top retained level
    bool insideHeuristicDomain = true;
    bool asymptoticOnly = false;
};

template <class C>
struct BranchJet {
    C y{}, yp{}, ypp{};
    bool insideHeuristicDomain = true;
};

namespace detail {

template <class C>
C localCoordinate(CriticalPoint p, const C& x) {
    switch (p) {
        case CriticalPoint::Zero: return x;
        case CriticalPoint::One: return C(1) - x;
        case CriticalPoint::Infinity:
            if (absAsDouble(x) == 0.0)
                throw DivisionByZero("evaluate: x = 0 for an expansion at infinity");
            return C(1) / x;
    }
    throw DivisionByZero("evaluate: bad critical point");
}

} // namespace detail

template <class C>
BranchValue<C> evaluateBranch(const BranchExpansion<C>& b, const C& x) {
    using std::log;
    const C s = detail::localCoordinate(b.point, x);
    if (absAsDouble(s) == 0.0)
        throw DivisionByZero("evaluate: exactly at the critical point");
    const C L = log(s);
    auto [den, err] = b.series.evaluateWithError(L);

    BranchValue<C> out;
    out.insideHeuristicDomain = absAsDouble(s) < b.radius;
    out.asymptoticOnly = b.logarithmic;
    switch (b.form) {
        case ValueForm::Direct:
            out.value = den;
            out.errorEstimate = err;
            return out;
        case ValueForm::Inverse:
        case ValueForm::OneMinusInverse: {
            const double mag = absAsDouble(den);
            if (mag < 1e-12 || mag < 10 * err)
                throw DenominatorNearZero(
                    "evaluate: denominator series vanishes here (near a pole of the branch)");
            const C inv = C(1) / den;
            out.value = (b.form == ValueForm::Inverse) ? inv : C(1) - inv;
            out.errorEstimate = err * absAsDouble(inv * inv);
            return out;
        }
    }
    throw Error("Internal", "evaluateBranch: unhandled form");
}

// Value and first two derivatives with respect to the global variable x.
template <class C>
BranchJet<C> evaluateBranchJet(const BranchExpansion<C>& b, const C& x) {
    using std::log;
    const C s = detail::localCoordinate(b.point, x);
    if (absAsDouble(s) == 0.0)
        throw DivisionByZero("evaluate: exactly at the critical point");
    const C L = log(s);

    const GradedSeries<C> d1 = b.series.derivative();
    const GradedSeries<C> d2 = d1.derivative();
    const C E = b.series.evaluate(L);
    const C Ep = d1.evaluate(L);
    const C Epp = d2.evaluate(L);

    // Map through the value form (still derivatives in s).
    C F, Fp, Fpp;
    switch (b.form) {
        case ValueForm::Direct:
            F = E; Fp = Ep; Fpp = Epp;
            break;
        case ValueForm::Inverse:
        case ValueForm::OneMinusInverse: {
            if (absAsDouble(E) < 1e-12)
                throw DenominatorNearZero("evaluate: denominator series vanishes here");
            const C inv = C(1) / E;
            if (b.form == ValueForm::Inverse) {
                F = inv;
                Fp = -Ep * inv * inv;
                Fpp = (C(2) * Ep * Ep - E * Epp) * inv * inv * inv;
            } else {
                F = C(1) - inv;
                Fp = Ep * inv * inv;
                Fpp = (Epp * E - C(2) * Ep * Ep) * inv * inv * inv;
            }
            break;
        }
        default:
            throw Error("Internal", "evaluateBranchJet: unhandled form");
    }

    BranchJet<C> out;
    out.insideHeuristicDomain = absAsDouble(s) < b.radius;
    switch (b.point) {
        case CriticalPoint::Zero:
            out.y = F; out.yp = Fp; out.ypp = Fpp;
            break;
        case CriticalPoint::One:
            out.y = F; out.yp = -Fp; out.ypp = Fpp;
            break;
        case CriticalPoint::Infinity: {
            // s = 1/x: ds/dx = -s^2, d2s/dx2 = 2 s^3.
            out.y = F;
            out.yp = -s * s * Fp;
            out.ypp = s * s * s * s * Fpp + C(2) * s * s * s * Fp;
            break;
        }
    }
    return out;
}

} // namespace pvi
