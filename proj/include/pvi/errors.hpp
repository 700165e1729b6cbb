// Exception taxonomy for the Painleve VI critical-behavior library.
//
// Every failure mode that user input can trigger maps to a named exception
// carrying a stable machine-readable code (used by the CLI to emit JSON
// diagnostics) and a human-readable message.

#pragma once

#include <stdexcept>
#include <string>

namespace pvi {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define PVI_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& message)                     \
            : Error(#Name, message) {}                                \
    }

// Parameter and trace layer.
PVI_DEFINE_ERROR(ThetaInfZero);          // theta_inf = 0 not representable; use the sign equivalence
PVI_DEFINE_ERROR(BoundaryClass);         // trace lies on a class boundary (p = 2 or real p <= -2)
PVI_DEFINE_ERROR(DegenerateDenominator); // vanishing cosine product in the Taylor connection formula
PVI_DEFINE_ERROR(SingularA);             // amplitude A^2 = 0, i.e. sigma^2 = (theta0 +- thetax)^2

// Series engine.
PVI_DEFINE_ERROR(ResonanceError);        // singular linear system: exponent resonance at this order
PVI_DEFINE_ERROR(ConditionViolation);    // parameters violate the existence condition of the class
PVI_DEFINE_ERROR(ReciprocalOfZeroSeries);// reciprocal of a series with no invertible leading term
PVI_DEFINE_ERROR(DivisionByZero);        // scalar division by (numerically) zero

// Evaluation.
PVI_DEFINE_ERROR(OutsideDomain);         // point violates the validity domain of the representation
PVI_DEFINE_ERROR(DenominatorNearZero);   // inverse-form denominator below threshold (near a pole)
PVI_DEFINE_ERROR(CoshArgumentOverflow);  // exponential overflow in the cosh-form evaluation

// Numerical integration.
PVI_DEFINE_ERROR(StepUnderflow);         // adaptive step shrank below the floor
PVI_DEFINE_ERROR(SingularityOnPath);     // path passes too close to x = 0 or x = 1
PVI_DEFINE_ERROR(NonPowerLaw);           // samples do not follow a power law within tolerance
PVI_DEFINE_ERROR(FitDivergence);         // oscillation fit failed to converge
PVI_DEFINE_ERROR(NoConvergence);         // generic iteration failed to converge

// Pole lattice.
PVI_DEFINE_ERROR(DegenerateRadical);     // double root of the level-one quadratic (z1 = z2)
PVI_DEFINE_ERROR(ReversionBreakdown);    // formal reversion lost triangularity
PVI_DEFINE_ERROR(NearSingularity);       // refinement target too close to a lattice singularity

// Elliptic layer.
PVI_DEFINE_ERROR(LatticePoint);          // Weierstrass P evaluated at (numerically) a lattice point
PVI_DEFINE_ERROR(DegenerateLattice);     // period ratio has (numerically) zero imaginary part

#undef PVI_DEFINE_ERROR

} // namespace pvi
