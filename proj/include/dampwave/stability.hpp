#pragma once

#include <complex>
#include <string>
#include <vector>

namespace dampwave::stability {

/// p(z) = a z^2 + b z + c with a > 0.
struct QuadraticCoeffs {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
};

/// Both roots strictly inside the unit disk: |c| < a, p(1) > 0, p(-1) > 0.
/// Throws InvalidArgument when a <= 0.
bool jury_stable(const QuadraticCoeffs& q);

/// Characteristic polynomial of mode n of the explicit amplification matrix
/// I + kM for constant damping gamma_n:
/// z^2 + (-2 + gamma k) z + 1 - k gamma + 4 r^2 sin^2(n pi / 2N), r = k/h.
QuadraticCoeffs explicit_char_poly(int n, int N, double k, double h, double gamma_n);

struct ConditionCheck {
    std::string name;
    bool satisfied = false;
    double value = 0.0;  // left-hand side
    double bound = 0.0;  // right-hand side; satisfied iff value < bound
    double margin() const { return bound - value; }
};

struct StabilityVerdict {
    bool stable = false;
    double gamma_star = 0.0;
    std::vector<ConditionCheck> conditions;
};

/// The explicit scheme's sufficient conditions k < 2/gamma* and
/// sqrt(k)/h < sqrt(gamma*)/2. With gamma* = 0 both are unsatisfiable.
StabilityVerdict check_explicit_stability(double k, double h, double gamma_star);

/// Per-mode Jury test of explicit_char_poly for n = 1..N-1 with gamma*.
/// Near the boundary this can disagree with check_explicit_stability,
/// which drops the mode-dependent sine factor.
std::vector<bool> explicit_mode_checks(int N, double k, double h, double gamma_star);

struct ModeAmplification {
    int n = 0;
    std::complex<double> lambda_plus, lambda_minus;
    std::complex<double> mu_plus, mu_minus;
};

struct AmplificationSpectrum {
    std::vector<ModeAmplification> modes;
    double max_modulus = 0.0;
};

/// Eigenvalues of M for constant damping,
/// lambda_n = -gamma/2 +- sqrt(gamma^2 - 16 sin^2(n pi / 2N) / h^2) / 2,
/// and of the FD-(1,1) step, mu = (1 + k lambda / 2) / (1 - k lambda / 2).
AmplificationSpectrum implicit_amplification(int N, double h, double k, double gamma);

/// Drops the imaginary part when it is below 1e-12 in magnitude.
std::complex<double> demote(std::complex<double> z);

}  // namespace dampwave::stability
