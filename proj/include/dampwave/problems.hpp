#pragma once

#include "dampwave/expression.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dampwave {

using SpaceFunction = std::function<double(double x)>;
using TimeFunction = std::function<double(double t)>;
using SpaceTimeFunction = std::function<double(double x, double t)>;

/// u_tt = u_xx - gamma(x) u_t + g(x,t) on [a,b], u(x,0) = phi, u_t(x,0) = psi,
/// u(a,t) = u_a(t), u(b,t) = u_b(t).
struct DampedWaveProblem {
    std::string name;
    double a = 0.0;
    double b = 1.0;
    SpaceFunction gamma;
    SpaceTimeFunction g;
    SpaceFunction phi;
    SpaceFunction psi;
    TimeFunction u_a;
    TimeFunction u_b;
    std::optional<SpaceTimeFunction> exact;

    bool has_exact() const { return exact.has_value(); }
};

/// gamma = 2, g = 0, phi = sin x, psi = -sin x on (0, pi) with homogeneous
/// boundary data; exact solution exp(-t) sin x.
DampedWaveProblem sample_problem();

/// Names accepted by builtin_problem().
std::vector<std::string> builtin_names();

/// "sample", or "manufactured": gamma = 1 + x on (0, 1) with forcing and
/// time-dependent boundary data chosen so u = cos(t)(1 + x^2).
DampedWaveProblem builtin_problem(std::string_view name);

/// Expression sources for a problem; every field is required except exact.
struct ProblemSource {
    double a = 0.0;
    double b = 1.0;
    std::string gamma, g, phi, psi, u_a, u_b;
    std::optional<std::string> exact;
};

DampedWaveProblem problem_from_source(const ProblemSource& src, std::string name = "custom");

/// Parses the JSON problem document: either {"builtin": name} or the full
/// schema with "domain", "gamma", "g", "phi", "psi", "u_a", "u_b" and an
/// optional "exact".
DampedWaveProblem load_problem_config(std::string_view json_text);

/// Reads and parses a problem file.
DampedWaveProblem load_problem_file(const std::string& path);

/// Corner compatibility phi(a) = u_a(0), phi(b) = u_b(0). Returns one
/// message per violated corner (tolerance 1e-10); empty when compatible.
std::vector<std::string> compatibility_warnings(const DampedWaveProblem& p);

}  // namespace dampwave
