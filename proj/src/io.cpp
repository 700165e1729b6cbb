#include "pvi/io.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "pvi/errors.hpp"

namespace pvi::io {

json complexJson(const Complex64& z) { return json::array({z.real(), z.imag()}); }

Complex64 complexFromJson(const json& j) {
    if (j.is_number()) return Complex64(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return Complex64(j[0].get<double>(), j[1].get<double>());
    throw std::runtime_error("expected a number or [re, im] array");
}

Complex64 parseComplexArg(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) throw std::runtime_error("empty complex literal");

    auto parseReal = [](const std::string& t) {
        size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw std::runtime_error("bad numeric literal: " + t);
        return v;
    };

    // "a,b"
    if (auto comma = s.find(','); comma != std::string::npos)
        return Complex64(parseReal(s.substr(0, comma)), parseReal(s.substr(comma + 1)));

    // Forms ending in i/I: pure imaginary or a±bi.
    if (s.back() == 'i' || s.back() == 'I') {
        std::string body = s.substr(0, s.size() - 1);
        // Find the sign separating real and imaginary parts (skip position 0
        // and signs that belong to an exponent).
        for (size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
                std::string im = body.substr(k);
                if (im == "+") im = "1";
                if (im == "-") im = "-1";
                return Complex64(parseReal(body.substr(0, k)), parseReal(im));
            }
        }
        if (body.empty() || body == "+") return Complex64(0.0, 1.0);
        if (body == "-") return Complex64(0.0, -1.0);
        return Complex64(0.0, parseReal(body));
    }

    return Complex64(parseReal(s), 0.0);
}

json thetaJson(const Theta<Complex64>& th) {
    return json{{"theta0", complexJson(th.t0)},
                {"thetaX", complexJson(th.tx)},
                {"theta1", complexJson(th.t1)},
                {"thetaInf", complexJson(th.tinf)}};
}

json coefficientsJson(const Coefficients<Complex64>& cf) {
    return json{{"alpha", complexJson(cf.alpha)},
                {"beta", complexJson(cf.beta)},
                {"gamma", complexJson(cf.gamma)},
                {"delta", complexJson(cf.delta)}};
}

json monodromyJson(const MonodromyData<Complex64>& m) {
    return json{{"p0", complexJson(m.p0)},   {"pX", complexJson(m.px)},
                {"p1", complexJson(m.p1)},   {"pInf", complexJson(m.pInf)},
                {"p0x", complexJson(m.p0x)}, {"px1", complexJson(m.px1)},
                {"p01", complexJson(m.p01)}};
}

Theta<Complex64> thetaFromJson(const json& j) {
    return Theta<Complex64>{complexFromJson(j.at("theta0")), complexFromJson(j.at("thetaX")),
                            complexFromJson(j.at("theta1")), complexFromJson(j.at("thetaInf"))};
}

namespace {

CriticalPoint pointFromName(const std::string& s) {
    if (s == "0") return CriticalPoint::Zero;
    if (s == "1") return CriticalPoint::One;
    if (s == "inf") return CriticalPoint::Infinity;
    throw std::runtime_error("unknown critical point '" + s + "'");
}

ValueForm formFromName(const std::string& s) {
    if (s == "direct") return ValueForm::Direct;
    if (s == "inverse") return ValueForm::Inverse;
    if (s == "one-minus-inverse") return ValueForm::OneMinusInverse;
    throw std::runtime_error("unknown value form '" + s + "'");
}

} // namespace

json branchJson(const BranchExpansion<Complex64>& b) {
    json constants = json::object();
    for (const auto& [name, value] : b.constants) constants[name] = complexJson(value);
    json terms = json::array();
    for (const auto& [k, v] : b.series.terms())
        terms.push_back(json{{"n", k.n}, {"m", k.m}, {"l", k.l}, {"c", complexJson(v)}});
    return json{{"point", criticalPointName(b.point)},
                {"class", classTagName(b.tag)},
                {"theta", thetaJson(b.theta)},
                {"constants", constants},
                {"lambda", complexJson(b.lambda)},
                {"order", b.order},
                {"form", valueFormName(b.form)},
                {"logarithmic", b.logarithmic},
                {"predictedResidualOrder", b.predictedResidualOrder},
                {"radius", b.radius},
                {"caps",
                 json{{"maxN", b.series.caps().maxN},
                      {"maxM", b.series.caps().maxM},
                      {"maxL", b.series.caps().maxL}}},
                {"terms", terms}};
}

BranchExpansion<Complex64> branchFromJson(const json& j) {
    BranchExpansion<Complex64> b;
    b.point = pointFromName(j.at("point").get<std::string>());
    b.tag = classTagFromName(j.at("class").get<std::string>());
    b.theta = thetaFromJson(j.at("theta"));
    b.coeffs = coefficientsFromTheta(b.theta);
    for (const auto& [name, value] : j.at("constants").items())
        b.constants[name] = complexFromJson(value);
    b.lambda = complexFromJson(j.at("lambda"));
    b.order = j.at("order").get<int>();
    b.form = formFromName(j.at("form").get<std::string>());
    b.logarithmic = j.at("logarithmic").get<bool>();
    b.predictedResidualOrder = j.at("predictedResidualOrder").get<double>();
    b.radius = j.at("radius").get<double>();
    GradedCaps caps{j.at("caps").at("maxN").get<int>(), j.at("caps").at("maxM").get<int>(),
                    j.at("caps").at("maxL").get<int>()};
    b.series = GradedSeries<Complex64>(b.lambda, caps);
    for (const auto& term : j.at("terms"))
        b.series.insert(
            GradedKey{term.at("n").get<int>(), term.at("m").get<int>(), term.at("l").get<int>()},
            complexFromJson(term.at("c")));
    return b;
}

std::string renderJson(const json& j) { return j.dump(2) + "\n"; }

void writeError(std::ostream& os, const std::string& code, const std::string& message) {
    os << json{{"error", code}, {"message", message}}.dump() << "\n";
}

} // namespace pvi::io
