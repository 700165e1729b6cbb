// JSON and text serialization helpers shared by the command-line tool and
// the test suites.  Complex numbers are rendered as two-element arrays
// [re, im]; all floating-point output round-trips at full double precision.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pvi/branches.hpp"
#include "pvi/monodromy.hpp"
#include "pvi/parameters.hpp"
#include "pvi/scalar.hpp"

namespace pvi::io {

using json = nlohmann::json;

json complexJson(const Complex64& z);
Complex64 complexFromJson(const json& j);

// Accepts "1.5", "1.5,0.25", "1.5+0.25i", "1.5-0.25i", "0.25i".
Complex64 parseComplexArg(const std::string& text);

json thetaJson(const Theta<Complex64>& th);
json coefficientsJson(const Coefficients<Complex64>& cf);
json monodromyJson(const MonodromyData<Complex64>& m);

Theta<Complex64> thetaFromJson(const json& j);

// Full round-trip serialization of a critical-behavior expansion.  Series
// terms are emitted as {"n": n, "m": m, "l": l, "c": [re, im]} sorted by
// (n, m, l) so output is deterministic.
json branchJson(const BranchExpansion<Complex64>& b);
BranchExpansion<Complex64> branchFromJson(const json& j);

// Pretty single-document rendering with a trailing newline.
std::string renderJson(const json& j);

// {"error": code, "message": message} on the given stream.
void writeError(std::ostream& os, const std::string& code, const std::string& message);

} // namespace pvi::io
