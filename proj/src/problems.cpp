#include "dampwave/problems.hpp"

#include <algorithm>

#include "dampwave/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace dampwave {

namespace {

constexpr double kCompatibilityTol = 1e-10;

const char* const kManufactured[] = {
    "1 + x",                                                    // gamma
    "-cos(t)*(1 + x^2) - 2*cos(t) - (1 + x)*(1 + x^2)*sin(t)",  // g
    "1 + x^2",                                                  // phi
    "0",                                                        // psi
    "cos(t)",                                                   // u_a
    "2*cos(t)",                                                 // u_b
    "cos(t)*(1 + x^2)",                                         // exact
};

expr::Expression parse_field(const std::string& field, const std::string& text) {
    try {
        return expr::parse_expression(text);
    } catch (const ParseError& e) {
        throw ParseError(e.offset(), e.expected(), "field \"" + field + "\": " + e.what());
    }
}

void reject_variable(const std::string& field, const expr::Expression& e, expr::Variable v) {
    if (e.uses(v)) {
        throw SchemaError("field \"" + field + "\" may not depend on " +
                          (v == expr::Variable::x ? "x" : "t"));
    }
}

}  // namespace

DampedWaveProblem sample_problem() {
    DampedWaveProblem p;
    p.name = "sample";
    p.a = 0.0;
    p.b = std::acos(-1.0);
    p.gamma = [](double) { return 2.0; };
    p.g = [](double, double) { return 0.0; };
    p.phi = [](double x) { return std::sin(x); };
    p.psi = [](double x) { return -std::sin(x); };
    p.u_a = [](double) { return 0.0; };
    p.u_b = [](double) { return 0.0; };
    p.exact = [](double x, double t) { return std::exp(-t) * std::sin(x); };
    return p;
}

std::vector<std::string> builtin_names() { return {"sample", "manufactured"}; }

DampedWaveProblem builtin_problem(std::string_view name) {
    if (name == "sample") return sample_problem();
    if (name == "manufactured") {
        ProblemSource src;
        src.a = 0.0;
        src.b = 1.0;
        src.gamma = kManufactured[0];
        src.g = kManufactured[1];
        src.phi = kManufactured[2];
        src.psi = kManufactured[3];
        src.u_a = kManufactured[4];
        src.u_b = kManufactured[5];
        src.exact = kManufactured[6];
        return problem_from_source(src, "manufactured");
    }
    throw InvalidArgument("unknown builtin problem '" + std::string(name) + "'");
}

DampedWaveProblem problem_from_source(const ProblemSource& src, std::string name) {
    if (!(std::isfinite(src.a) && std::isfinite(src.b)) || src.b <= src.a) {
        throw SchemaError("domain must satisfy a < b");
    }
    const auto gamma = parse_field("gamma", src.gamma);
    const auto g = parse_field("g", src.g);
    const auto phi = parse_field("phi", src.phi);
    const auto psi = parse_field("psi", src.psi);
    const auto u_a = parse_field("u_a", src.u_a);
    const auto u_b = parse_field("u_b", src.u_b);
    reject_variable("gamma", gamma, expr::Variable::t);
    reject_variable("phi", phi, expr::Variable::t);
    reject_variable("psi", psi, expr::Variable::t);
    reject_variable("u_a", u_a, expr::Variable::x);
    reject_variable("u_b", u_b, expr::Variable::x);

    DampedWaveProblem p;
    p.name = std::move(name);
    p.a = src.a;
    p.b = src.b;
    p.gamma = [gamma](double x) { return gamma(x, 0.0); };
    p.g = [g](double x, double t) { return g(x, t); };
    p.phi = [phi](double x) { return phi(x, 0.0); };
    p.psi = [psi](double x) { return psi(x, 0.0); };
    p.u_a = [u_a](double t) { return u_a(0.0, t); };
    p.u_b = [u_b](double t) { return u_b(0.0, t); };
    if (src.exact) {
        const auto exact = parse_field("exact", *src.exact);
        p.exact = [exact](double x, double t) { return exact(x, t); };
    }
    return p;
}

DampedWaveProblem load_problem_config(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("problem document must be a JSON object");

    if (doc.contains("builtin")) {
        if (!doc["builtin"].is_string()) throw SchemaError("field \"builtin\" must be a string");
        const auto name = doc["builtin"].get<std::string>();
        const auto names = builtin_names();
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw SchemaError("unknown builtin problem '" + name + "'");
        }
        return builtin_problem(name);
    }

    auto string_field = [&](const char* key) -> std::string {
        if (!doc.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
        if (!doc[key].is_string()) throw SchemaError(std::string("field \"") + key + "\" must be a string");
        return doc[key].get<std::string>();
    };

    ProblemSource src;
    if (!doc.contains("domain")) throw SchemaError("missing field \"domain\"");
    const auto& domain = doc["domain"];
    if (!domain.is_array() || domain.size() != 2 || !domain[0].is_number() || !domain[1].is_number()) {
        throw SchemaError("field \"domain\" must be an array [a, b] of two numbers");
    }
    src.a = domain[0].get<double>();
    src.b = domain[1].get<double>();
    src.gamma = string_field("gamma");
    src.g = string_field("g");
    src.phi = string_field("phi");
    src.psi = string_field("psi");
    src.u_a = string_field("u_a");
    src.u_b = string_field("u_b");
    if (doc.contains("exact") && !doc["exact"].is_null()) src.exact = string_field("exact");
    return problem_from_source(src);
}

DampedWaveProblem load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open problem file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_problem_config(buf.str());
}

std::vector<std::string> compatibility_warnings(const DampedWaveProblem& p) {
    std::vector<std::string> out;
    const double left = p.phi(p.a) - p.u_a(0.0);
    const double right = p.phi(p.b) - p.u_b(0.0);
    if (std::abs(left) > kCompatibilityTol) {
        out.push_back("phi(a) - u_a(0) = " + std::to_string(left) + " (incompatible corner data at x = a)");
    }
    if (std::abs(right) > kCompatibilityTol) {
        out.push_back("phi(b) - u_b(0) = " + std::to_string(right) + " (incompatible corner data at x = b)");
    }
    return out;
}

}  // namespace dampwave
