#pragma once

#include "dampwave/linalg.hpp"
#include "dampwave/operators.hpp"
#include "dampwave/pade.hpp"
#include "dampwave/problems.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dampwave {

enum class SchemeKind { semigroup, oefd, oifd };

/// How the two-level baselines obtain u^1.
enum class StartUp {
    taylor2,  // u^1 = phi + k psi + k^2/2 (u_tt at t = 0)
    ghost,    // ghost node u^{-1} = u^1 - 2k psi substituted into the scheme's first step
};

struct SchemeConfig {
    SchemeKind kind = SchemeKind::semigroup;
    int S = 1;  // denominator degree (semigroup only)
    int T = 1;  // numerator degree (semigroup only)
    double k = 0.0;
    StartUp start_up = StartUp::taylor2;

    static SchemeConfig semigroup(int S, int T, double k) { return {SchemeKind::semigroup, S, T, k}; }
    static SchemeConfig fd01(double k) { return semigroup(0, 1, k); }
    static SchemeConfig fd11(double k) { return semigroup(1, 1, k); }
    static SchemeConfig oefd(double k, StartUp s = StartUp::taylor2) { return {SchemeKind::oefd, 0, 0, k, s}; }
    static SchemeConfig oifd(double k, StartUp s = StartUp::taylor2) { return {SchemeKind::oifd, 0, 0, k, s}; }

    /// "fd01", "fd11", "fd22", ..., "oefd", "oifd".
    std::string name() const;
    /// Display labels: EX-(0,1), IM-(1,1), OEFD, OIFD.
    std::string label() const;
};

/// Parses "fd01", "fd11", "fdST" (S,T digits), "oefd", "oifd".
SchemeConfig parse_scheme(const std::string& name, double k);

/// V = [u(x_1..x_{N-1}); u_t(x_1..x_{N-1})] at time t.
struct StateVector {
    double t = 0.0;
    std::vector<double> values;

    std::size_t n_interior() const { return values.size() / 2; }
    std::span<const double> displacement() const { return std::span<const double>(values).first(n_interior()); }
    std::span<const double> velocity() const { return std::span<const double>(values).subspan(n_interior()); }
    bool finite() const;
};

/// A configured time stepper. Everything that does not change between
/// steps (Pade coefficients, the banded LU of Q_S(kM) or of the OIFD
/// matrix, the baselines' u^0 and u^1) is built once here. Immutable and
/// shareable across threads.
class Stepper {
public:
    const SchemeConfig& config() const { return config_; }
    const SpatialGrid& grid() const { return grid_; }
    const BlockOperator& op() const { return op_; }
    const DampedWaveProblem& problem() const { return problem_; }

    /// True when each step needs a linear solve (semigroup S >= 1, oifd).
    bool implicit() const { return factorization_.has_value(); }
    const std::optional<RationalApproximant>& approximant() const { return approx_; }

    /// [phi(x_i); psi(x_i)] at t = 0.
    StateVector initial_state() const;
    /// Baselines only: u^0 and the start-up level u^1.
    const std::vector<double>& u0() const { return u0_; }
    const std::vector<double>& u1() const { return u1_; }

private:
    friend Stepper make_stepper(const SchemeConfig&, const BlockOperator&, const SpatialGrid&,
                                const DampedWaveProblem&);
    friend StateVector step_semigroup(const Stepper&, const StateVector&);
    friend std::vector<double> step_oefd(const Stepper&, std::span<const double>, std::span<const double>, double);
    friend std::vector<double> step_oifd(const Stepper&, std::span<const double>, std::span<const double>, double);

    Stepper(SchemeConfig config, BlockOperator op, SpatialGrid grid, DampedWaveProblem problem)
        : config_(config), op_(std::move(op)), grid_(std::move(grid)), problem_(std::move(problem)) {}

    SchemeConfig config_;
    BlockOperator op_;
    SpatialGrid grid_;
    DampedWaveProblem problem_;
    std::optional<RationalApproximant> approx_;
    std::vector<double> p_;
    std::optional<linalg::BandedFactorization> factorization_;
    std::vector<double> u0_;
    std::vector<double> u1_;
};

/// Throws InvalidArgument for k <= 0 or unsupported orders and
/// SingularMatrix if the implicit system cannot be factored.
Stepper make_stepper(const SchemeConfig& config, const BlockOperator& op, const SpatialGrid& grid,
                     const DampedWaveProblem& problem);

/// Q_S(kM) V^{n+1} = P_T(kM) V^n + (k/2) [P_T(kM) F(t_n) + Q_S(kM) F(t_{n+1})]
StateVector step_semigroup(const Stepper& stepper, const StateVector& state);

/// Ordinary explicit scheme:
/// (1 + gamma k/2) u^{n+1} = (2I + r^2 A) u^n + (gamma k/2 - 1) u^{n-1} + r^2 B(t_n) + k^2 g(t_n)
std::vector<double> step_oefd(const Stepper& stepper, std::span<const double> u_curr,
                              std::span<const double> u_prev, double t);

/// Ordinary implicit scheme:
/// (1 + gamma k/2 - r^2/2 A) u^{n+1} = (2 + r^2/2 A) u^n + (gamma k/2 - 1) u^{n-1}
///                                     + r^2/2 (B(t_{n+1}) + B(t_n)) + k^2 g(t_n)
std::vector<double> step_oifd(const Stepper& stepper, std::span<const double> u_curr,
                              std::span<const double> u_prev, double t);

/// Second-order Taylor start:
/// u^1 = phi + k psi + k^2/2 (Delta_h phi - gamma psi + g(x, 0)).
std::vector<double> startup_u1(const DampedWaveProblem& problem, const SpatialGrid& grid, double k);

inline constexpr std::size_t kMaxSteps = 10'000'000;

struct SnapshotPolicy {
    /// Keep every stride-th step; 0 keeps only the initial and final states.
    std::size_t stride = 1;

    static SnapshotPolicy all() { return {1}; }
    static SnapshotPolicy final_only() { return {0}; }
};

struct Trajectory {
    SpatialGrid grid;
    SchemeConfig config;
    std::size_t steps = 0;          // steps actually taken
    std::vector<StateVector> snapshots;
    bool blow_up = false;
    std::optional<std::size_t> blow_up_step;
    /// Largest |u| seen over all finite steps.
    double peak_magnitude = 0.0;

    double time(std::size_t j) const { return static_cast<double>(j) * config.k; }
    const StateVector& final_state() const { return snapshots.back(); }
    /// Snapshot whose time is closest to t.
    const StateVector& nearest(double t) const;
};

/// Number of steps J with J k <= t_final (tolerating rounding in t_final / k).
std::size_t step_count(double t_final, double k);

/// Advances from t = 0 to the last step with t <= t_final. Baselines start
/// from (u^0, u^1). The first non-finite state halts the run and sets
/// blow_up; the last finite state stays the final snapshot.
Trajectory solve_evolution(const DampedWaveProblem& problem, const SpatialGrid& grid, const SchemeConfig& config,
                           double t_final, SnapshotPolicy policy = SnapshotPolicy::all());

}  // namespace dampwave
