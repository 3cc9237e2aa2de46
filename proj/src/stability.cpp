#include "dampwave/stability.hpp"

#include "dampwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dampwave::stability {

namespace {

double mode_sine_squared(int n, int N) {
    const double s = std::sin(n * std::numbers::pi / (2.0 * N));
    return s * s;
}

}  // namespace

bool jury_stable(const QuadraticCoeffs& q) {
    if (!(q.a > 0.0)) throw InvalidArgument("jury_stable requires a > 0");
    const double p_plus = q.a + q.b + q.c;
    const double p_minus = q.a - q.b + q.c;
    return std::abs(q.c) < q.a && p_plus > 0.0 && p_minus > 0.0;
}

QuadraticCoeffs explicit_char_poly(int n, int N, double k, double h, double gamma_n) {
    const double r = k / h;
    return {1.0, -2.0 + gamma_n * k, 1.0 - k * gamma_n + 4.0 * r * r * mode_sine_squared(n, N)};
}

StabilityVerdict check_explicit_stability(double k, double h, double gamma_star) {
    if (!(k > 0.0) || !(h > 0.0)) throw InvalidArgument("stability check requires k > 0 and h > 0");
    if (gamma_star < 0.0) throw InvalidArgument("gamma* must be nonnegative");

    StabilityVerdict v;
    v.gamma_star = gamma_star;
    const double inf = std::numeric_limits<double>::infinity();

    ConditionCheck step{"k < 2/gamma*", false, k, gamma_star > 0.0 ? 2.0 / gamma_star : inf};
    // gamma* = 0 leaves no damping to absorb the r^2 term: unsatisfiable.
    ConditionCheck ratio{"sqrt(k)/h < sqrt(gamma*)/2", false, std::sqrt(k) / h, std::sqrt(gamma_star) / 2.0};
    step.satisfied = gamma_star > 0.0 && step.value < step.bound;
    ratio.satisfied = gamma_star > 0.0 && ratio.value < ratio.bound;
    v.conditions = {step, ratio};
    v.stable = std::all_of(v.conditions.begin(), v.conditions.end(), [](const auto& c) { return c.satisfied; });
    return v;
}

std::vector<bool> explicit_mode_checks(int N, double k, double h, double gamma_star) {
    std::vector<bool> out;
    for (int n = 1; n < N; ++n) out.push_back(jury_stable(explicit_char_poly(n, N, k, h, gamma_star)));
    return out;
}

std::complex<double> demote(std::complex<double> z) {
    return std::abs(z.imag()) < 1e-12 ? std::complex<double>(z.real(), 0.0) : z;
}

AmplificationSpectrum implicit_amplification(int N, double h, double k, double gamma) {
    if (N < 2) throw InvalidArgument("implicit_amplification requires N >= 2");
    AmplificationSpectrum spec;
    for (int n = 1; n < N; ++n) {
        const std::complex<double> disc = std::sqrt(std::complex<double>(
            gamma * gamma - 16.0 / (h * h) * mode_sine_squared(n, N), 0.0));
        ModeAmplification m;
        m.n = n;
        m.lambda_plus = demote(-gamma / 2.0 + disc / 2.0);
        m.lambda_minus = demote(-gamma / 2.0 - disc / 2.0);
        auto cayley = [k](std::complex<double> l) { return (1.0 + k * l / 2.0) / (1.0 - k * l / 2.0); };
        m.mu_plus = demote(cayley(m.lambda_plus));
        m.mu_minus = demote(cayley(m.lambda_minus));
        spec.max_modulus = std::max({spec.max_modulus, std::abs(m.mu_plus), std::abs(m.mu_minus)});
        spec.modes.push_back(m);
    }
    return spec;
}

}  // namespace dampwave::stability
