// Command-line front end for the Painleve VI critical-behavior library.
//
// Subcommands:
//   params       parameter dictionary: theta <-> (alpha,beta,gamma,delta) <-> traces
//   fricke       residual of the monodromy cubic at a 7-tuple of traces
//   symmetry     apply permute01 / invx / swapxy to theta, trace, or point payloads
//   expand       construct a critical-behavior expansion by class tag
//   eval         evaluate a stored expansion at a point
//   domain       validity-domain boundary polylines for the exponential form
//   classify     classify an approach path by its slope
//   elliptic     evaluate the elliptic representation near x = 0
//   halfperiods  half-periods omega1, omega2 and the modulus dictionary
//   poles        asymptotic pole lattice and refined pole positions
//   integrate    numerical integration of the equation along a path
//   check        built-in cross-checks and golden-value suite
//
// Exit codes: 0 success, 1 mathematical/domain error (JSON diagnostic on
// stderr), 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pvi/errors.hpp"
#include "pvi/format.hpp"
#include "pvi/io.hpp"
#include "pvi/monodromy.hpp"
#include "pvi/parameters.hpp"
#include "pvi/symmetry.hpp"

namespace {

using pvi::Complex64;
using pvi::io::json;

struct GlobalOptions {
    std::string precision = "double";
    int jobs = 1;
};

Complex64 arg(const std::string& text, const char* name) {
    try {
        return pvi::io::parseComplexArg(text);
    } catch (const std::exception& e) {
        throw CLI::ValidationError(std::string(name) + ": " + e.what());
    }
}

json loadJsonFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pvi::Error("IoError", "cannot open " + path);
    json j;
    in >> j;
    return j;
}

// ---------------------------------------------------------------------------
// params
// ---------------------------------------------------------------------------

struct ParamsOptions {
    std::vector<std::string> theta;  // 4 complex literals
    std::vector<std::string> coeffs; // 4 complex literals alpha beta gamma delta
    std::string jsonPath;
};

void runParams(const ParamsOptions& opt) {
    std::optional<pvi::Theta<Complex64>> th;
    std::optional<pvi::Coefficients<Complex64>> cf;

    if (!opt.jsonPath.empty()) {
        json j = loadJsonFile(opt.jsonPath);
        if (j.contains("theta0")) {
            th = pvi::io::thetaFromJson(j);
        } else if (j.contains("alpha")) {
            cf = pvi::Coefficients<Complex64>{
                pvi::io::complexFromJson(j.at("alpha")), pvi::io::complexFromJson(j.at("beta")),
                pvi::io::complexFromJson(j.at("gamma")), pvi::io::complexFromJson(j.at("delta"))};
        } else {
            throw pvi::Error("IoError", "JSON payload needs theta0..thetaInf or alpha..delta");
        }
    }
    if (opt.theta.size() == 4)
        th = pvi::Theta<Complex64>{arg(opt.theta[0], "--theta"), arg(opt.theta[1], "--theta"),
                                   arg(opt.theta[2], "--theta"), arg(opt.theta[3], "--theta")};
    if (opt.coeffs.size() == 4)
        cf = pvi::Coefficients<Complex64>{arg(opt.coeffs[0], "--coeffs"), arg(opt.coeffs[1], "--coeffs"),
                                          arg(opt.coeffs[2], "--coeffs"), arg(opt.coeffs[3], "--coeffs")};
    if (!th && !cf)
        throw CLI::ValidationError("params: provide --theta t0 tx t1 tinf, --coeffs a b c d, or --json");

    if (th && !cf) cf = pvi::coefficientsFromTheta(*th);
    if (!th) th = pvi::thetaFromCoefficients(*cf);

    const auto canonical = pvi::canonicalTheta(*th);
    const auto traces = pvi::tracesFromTheta(canonical);
    json out{{"theta", pvi::io::thetaJson(*th)},
             {"thetaCanonical", pvi::io::thetaJson(canonical)},
             {"coefficients", pvi::io::coefficientsJson(*cf)},
             {"traces",
              {{"p0", pvi::io::complexJson(traces[0])},
               {"pX", pvi::io::complexJson(traces[1])},
               {"p1", pvi::io::complexJson(traces[2])},
               {"pInf", pvi::io::complexJson(traces[3])}}}};
    std::cout << pvi::io::renderJson(out);
}

// ---------------------------------------------------------------------------
// fricke
// ---------------------------------------------------------------------------

struct FrickeOptions {
    std::vector<std::string> p; // p0 px p1 pinf p0x px1 p01
    std::string jsonPath;
};

pvi::MonodromyData<Complex64> tracesFromPayload(const json& j) {
    if (j.contains("p") && j.at("p").is_array() && j.at("p").size() == 7) {
        const auto& a = j.at("p");
        return {pvi::io::complexFromJson(a[0]), pvi::io::complexFromJson(a[1]),
                pvi::io::complexFromJson(a[2]), pvi::io::complexFromJson(a[3]),
                pvi::io::complexFromJson(a[4]), pvi::io::complexFromJson(a[5]),
                pvi::io::complexFromJson(a[6])};
    }
    return {pvi::io::complexFromJson(j.at("p0")),  pvi::io::complexFromJson(j.at("pX")),
            pvi::io::complexFromJson(j.at("p1")),  pvi::io::complexFromJson(j.at("pInf")),
            pvi::io::complexFromJson(j.at("p0x")), pvi::io::complexFromJson(j.at("px1")),
            pvi::io::complexFromJson(j.at("p01"))};
}

void runFricke(const FrickeOptions& opt) {
    pvi::MonodromyData<Complex64> m;
    if (!opt.jsonPath.empty()) {
        m = tracesFromPayload(loadJsonFile(opt.jsonPath));
    } else if (opt.p.size() == 7) {
        m = {arg(opt.p[0], "--p"), arg(opt.p[1], "--p"), arg(opt.p[2], "--p"),
             arg(opt.p[3], "--p"), arg(opt.p[4], "--p"), arg(opt.p[5], "--p"),
             arg(opt.p[6], "--p")};
    } else {
        throw CLI::ValidationError("fricke: provide --p p0 pX p1 pInf p0x px1 p01 or --json");
    }
    const Complex64 w = pvi::frickeResidual(m);
    std::printf("%.15e %.15e\n", w.real(), w.imag());
}

// ---------------------------------------------------------------------------
// symmetry
// ---------------------------------------------------------------------------

struct SymmetryOptions {
    std::string op;
    std::string jsonPath;
    std::vector<std::string> theta;
    std::vector<std::string> point; // x y
};

pvi::SymmetryOp parseOp(const std::string& s) {
    if (s == "permute01") return pvi::SymmetryOp::Permute01;
    if (s == "invx") return pvi::SymmetryOp::InvertX;
    if (s == "swapxy") return pvi::SymmetryOp::SwapXY;
    throw CLI::ValidationError("symmetry: --op must be permute01, invx, or swapxy");
}

void runSymmetry(const SymmetryOptions& opt) {
    const pvi::SymmetryOp op = parseOp(opt.op);
    json out;
    bool any = false;

    if (opt.theta.size() == 4) {
        pvi::Theta<Complex64> th{arg(opt.theta[0], "--theta"), arg(opt.theta[1], "--theta"),
                                 arg(opt.theta[2], "--theta"), arg(opt.theta[3], "--theta")};
        out["theta"] = pvi::io::thetaJson(pvi::applyToTheta(op, th));
        any = true;
    }
    if (opt.point.size() == 2) {
        const auto [x1, y1] = pvi::applyToPoint(op, arg(opt.point[0], "--point"),
                                                arg(opt.point[1], "--point"));
        out["point"] = {{"x", pvi::io::complexJson(x1)}, {"y", pvi::io::complexJson(y1)}};
        any = true;
    }
    if (!opt.jsonPath.empty()) {
        json j = loadJsonFile(opt.jsonPath);
        if (j.contains("theta0"))
            out["theta"] = pvi::io::thetaJson(pvi::applyToTheta(op, pvi::io::thetaFromJson(j)));
        else if (j.contains("theta"))
            out["theta"] =
                pvi::io::thetaJson(pvi::applyToTheta(op, pvi::io::thetaFromJson(j.at("theta"))));
        if (j.contains("p0") || j.contains("p"))
            out["traces"] = pvi::io::monodromyJson(pvi::applyToTraces(op, tracesFromPayload(j)));
        else if (j.contains("traces"))
            out["traces"] =
                pvi::io::monodromyJson(pvi::applyToTraces(op, tracesFromPayload(j.at("traces"))));
        any = true;
    }
    if (!any)
        throw CLI::ValidationError("symmetry: provide --theta, --point, and/or --json payload");
    std::cout << pvi::io::renderJson(out);
}

// ---------------------------------------------------------------------------
// placeholder dispatch for the subcommands implemented in later layers
// ---------------------------------------------------------------------------

[[noreturn]] void notReady(const std::string& name) {
    throw pvi::Error("Unimplemented", name + ": not wired up yet");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Painleve VI critical behaviors, connection data, and pole lattices"};
    app.require_subcommand(1);
    GlobalOptions global;
    if (const char* env = std::getenv("PVI_PRECISION")) global.precision = env;
    app.add_option("--precision", global.precision, "double or extended")
        ->check(CLI::IsMember({"double", "extended"}));
    app.add_option("--jobs", global.jobs, "worker count (outputs are deterministic)");

    ParamsOptions paramsOpt;
    auto* params = app.add_subcommand("params", "parameter dictionary");
    params->add_option("--theta", paramsOpt.theta, "theta0 thetaX theta1 thetaInf")->expected(4);
    params->add_option("--coeffs", paramsOpt.coeffs, "alpha beta gamma delta")->expected(4);
    params->add_option("--json", paramsOpt.jsonPath, "JSON payload path");

    FrickeOptions frickeOpt;
    auto* fricke = app.add_subcommand("fricke", "monodromy cubic residual");
    fricke->add_option("--p", frickeOpt.p, "p0 pX p1 pInf p0x px1 p01")->expected(7);
    fricke->add_option("--json", frickeOpt.jsonPath, "JSON payload path");

    SymmetryOptions symOpt;
    auto* symmetry = app.add_subcommand("symmetry", "apply a symmetry operation");
    symmetry->add_option("--op", symOpt.op, "permute01 | invx | swapxy")->required();
    symmetry->add_option("--theta", symOpt.theta, "theta0 thetaX theta1 thetaInf")->expected(4);
    symmetry->add_option("--point", symOpt.point, "x y")->expected(2);
    symmetry->add_option("--json", symOpt.jsonPath, "JSON payload path");

    auto* expand = app.add_subcommand("expand", "construct an expansion by class tag");
    auto* eval = app.add_subcommand("eval", "evaluate a stored expansion");
    auto* domain = app.add_subcommand("domain", "validity-domain boundaries");
    auto* classify = app.add_subcommand("classify", "classify an approach path");
    auto* elliptic = app.add_subcommand("elliptic", "elliptic representation");
    auto* halfperiods = app.add_subcommand("halfperiods", "half-periods and modulus data");
    auto* poles = app.add_subcommand("poles", "asymptotic pole lattice");
    auto* integrate = app.add_subcommand("integrate", "numerical integration");
    auto* check = app.add_subcommand("check", "cross-checks and golden suite");

    try {
        app.parse(argc, argv);
        if (params->parsed()) runParams(paramsOpt);
        else if (fricke->parsed()) runFricke(frickeOpt);
        else if (symmetry->parsed()) runSymmetry(symOpt);
        else if (expand->parsed()) notReady("expand");
        else if (eval->parsed()) notReady("eval");
        else if (domain->parsed()) notReady("domain");
        else if (classify->parsed()) notReady("classify");
        else if (elliptic->parsed()) notReady("elliptic");
        else if (halfperiods->parsed()) notReady("halfperiods");
        else if (poles->parsed()) notReady("poles");
        else if (integrate->parsed()) notReady("integrate");
        else if (check->parsed()) notReady("check");
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const pvi::Error& e) {
        pvi::io::writeError(std::cerr, e.code(), e.what());
        return 1;
    } catch (const std::exception& e) {
        pvi::io::writeError(std::cerr, "Internal", e.what());
        return 1;
    }
    return 0;
}
