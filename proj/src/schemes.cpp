#include "dampwave/schemes.hpp"

#include "dampwave/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace dampwave {

namespace {

linalg::BandedMatrix denominator_matrix(const RationalApproximant& approx, const BlockOperator& op, double k) {
    const auto km = linalg::axpy_identity(k, linalg::interleaved_operator(op), 0.0);
    const auto q = approx.q_double();
    auto acc = linalg::axpy_identity(0.0, linalg::BandedMatrix::identity(op.state_size()), q.back());
    for (std::size_t j = q.size() - 1; j-- > 0;) acc = linalg::axpy_identity(1.0, acc * km, q[j]);
    return acc;
}

/// tridiag(off, diag_i, off) with diag_i = base_i + shift.
linalg::BandedMatrix tridiagonal(std::span<const double> base, double shift, double off) {
    const std::size_t n = base.size();
    linalg::BandedMatrix m(n, 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = base[i] + shift;
        if (i > 0) m.at(i, i - 1) = off;
        if (i + 1 < n) m.at(i, i + 1) = off;
    }
    return m;
}

std::vector<double> sample(const SpaceFunction& f, const SpatialGrid& grid) {
    std::vector<double> out;
    out.reserve(grid.n_interior());
    for (double x : grid.interior_nodes()) out.push_back(f(x));
    return out;
}

std::vector<double> ghost_start(const Stepper& s) {
    const auto& grid = s.grid();
    const auto& problem = s.problem();
    const auto& gamma = s.op().damping();
    const std::size_t n = grid.n_interior();
    const double k = s.config().k;
    const double r2 = (k / grid.h()) * (k / grid.h());
    const auto& x = grid.interior_nodes();
    const auto& u0 = s.u0();
    const auto psi = sample(problem.psi, grid);
    const auto b0 = boundary_vector(problem, grid, 0.0);

    std::vector<double> au0(n);
    s.op().apply_laplacian(u0, au0);
    std::vector<double> rhs(n);
    if (s.config().kind == SchemeKind::oefd) {
        for (std::size_t i = 0; i < n; ++i) {
            rhs[i] = 2.0 * u0[i] + r2 * au0[i] - (gamma[i] * k / 2.0 - 1.0) * 2.0 * k * psi[i] + r2 * b0[i] +
                     k * k * problem.g(x[i], 0.0);
        }
        for (double& v : rhs) v /= 2.0;
        return rhs;
    }
    const auto b1 = boundary_vector(problem, grid, k);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = 2.0 * u0[i] + 0.5 * r2 * au0[i] - (gamma[i] * k / 2.0 - 1.0) * 2.0 * k * psi[i] +
                 0.5 * r2 * (b1[i] + b0[i]) + k * k * problem.g(x[i], 0.0);
    }
    const std::vector<double> two(n, 2.0);
    const auto fact = linalg::lu_factor_banded(tridiagonal(two, r2, -0.5 * r2));
    return fact.solve(rhs);
}

}  // namespace

std::string SchemeConfig::name() const {
    switch (kind) {
        case SchemeKind::semigroup: return "fd" + std::to_string(S) + std::to_string(T);
        case SchemeKind::oefd: return "oefd";
        case SchemeKind::oifd: return "oifd";
    }
    return "?";
}

std::string SchemeConfig::label() const {
    switch (kind) {
        case SchemeKind::semigroup:
            return std::string(S == 0 ? "EX" : "IM") + "-(" + std::to_string(S) + "," + std::to_string(T) + ")";
        case SchemeKind::oefd: return "OEFD";
        case SchemeKind::oifd: return "OIFD";
    }
    return "?";
}

SchemeConfig parse_scheme(const std::string& name, double k) {
    if (name == "oefd") return SchemeConfig::oefd(k);
    if (name == "oifd") return SchemeConfig::oifd(k);
    if (name.size() == 4 && name.starts_with("fd") && std::isdigit(static_cast<unsigned char>(name[2])) &&
        std::isdigit(static_cast<unsigned char>(name[3]))) {
        return SchemeConfig::semigroup(name[2] - '0', name[3] - '0', k);
    }
    throw InvalidArgument("unknown scheme '" + name + "' (expected fd01, fd11, fdST, oefd or oifd)");
}

bool StateVector::finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

StateVector Stepper::initial_state() const {
    const std::size_t n = grid_.n_interior();
    StateVector s{0.0, std::vector<double>(2 * n)};
    const auto& x = grid_.interior_nodes();
    for (std::size_t i = 0; i < n; ++i) {
        s.values[i] = problem_.phi(x[i]);
        s.values[n + i] = problem_.psi(x[i]);
    }
    return s;
}

Stepper make_stepper(const SchemeConfig& config, const BlockOperator& op, const SpatialGrid& grid,
                     const DampedWaveProblem& problem) {
    if (!(config.k > 0.0) || !std::isfinite(config.k)) {
        throw InvalidArgument("time step k must be positive (got " + std::to_string(config.k) + ")");
    }
    if (op.n_interior() != grid.n_interior()) throw DimensionMismatch("operator does not match grid");

    Stepper s(config, op, grid, problem);
    const double k = config.k;
    switch (config.kind) {
        case SchemeKind::semigroup: {
            s.approx_ = pade_coefficients(config.S, config.T);
            s.p_ = s.approx_->p_double();
            if (config.S >= 1) s.factorization_ = linalg::lu_factor_banded(denominator_matrix(*s.approx_, op, k));
            break;
        }
        case SchemeKind::oefd:
        case SchemeKind::oifd: {
            s.u0_ = sample(problem.phi, grid);
            if (config.kind == SchemeKind::oifd) {
                const double r2 = (k / grid.h()) * (k / grid.h());
                std::vector<double> diag(op.damping());
                for (double& d : diag) d = 1.0 + d * k / 2.0;
                s.factorization_ = linalg::lu_factor_banded(tridiagonal(diag, r2, -0.5 * r2));
            }
            s.u1_ = config.start_up == StartUp::ghost ? ghost_start(s) : startup_u1(problem, grid, k);
            break;
        }
    }
    return s;
}

StateVector step_semigroup(const Stepper& s, const StateVector& state) {
    if (s.config_.kind != SchemeKind::semigroup) throw InvalidArgument("step_semigroup needs a semigroup stepper");
    const std::size_t m = s.op_.state_size();
    if (state.values.size() != m) throw DimensionMismatch("state length does not match the stepper");
    const double k = s.config_.k;

    // Q V^{n+1} = P (V^n + k/2 F_n) + (k/2) Q F_{n+1}
    //   =>  V^{n+1} = Q^{-1} P (V^n + k/2 F_n) + (k/2) F_{n+1}
    std::vector<double> f(m);
    fill_forcing(s.problem_, s.grid_, state.t, f);
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = state.values[i] + 0.5 * k * f[i];
    std::vector<double> next = apply_poly(s.p_, s.op_, k, w);

    if (s.factorization_) {
        std::vector<double> inter(m);
        linalg::interleave(next, inter);
        s.factorization_->solve_in_place(inter);
        linalg::deinterleave(inter, next);
    }
    const double t_next = state.t + k;
    fill_forcing(s.problem_, s.grid_, t_next, f);
    for (std::size_t i = 0; i < m; ++i) next[i] += 0.5 * k * f[i];
    return StateVector{t_next, std::move(next)};
}

std::vector<double> step_oefd(const Stepper& s, std::span<const double> u_curr, std::span<const double> u_prev,
                              double t) {
    const std::size_t n = s.grid_.n_interior();
    if (u_curr.size() != n || u_prev.size() != n) throw DimensionMismatch("oefd: vectors must have length N-1");
    const double k = s.config_.k;
    const double r2 = (k / s.grid_.h()) * (k / s.grid_.h());
    const auto& gamma = s.op_.damping();
    const auto& x = s.grid_.interior_nodes();
    const auto bvec = boundary_vector(s.problem_, s.grid_, t);

    std::vector<double> next(n);
    s.op_.apply_laplacian(u_curr, next);
    for (std::size_t i = 0; i < n; ++i) {
        const double half = gamma[i] * k / 2.0;
        next[i] = (2.0 * u_curr[i] + r2 * next[i] + (half - 1.0) * u_prev[i] + r2 * bvec[i] +
                   k * k * s.problem_.g(x[i], t)) /
                  (1.0 + half);
    }
    return next;
}

std::vector<double> step_oifd(const Stepper& s, std::span<const double> u_curr, std::span<const double> u_prev,
                              double t) {
    const std::size_t n = s.grid_.n_interior();
    if (u_curr.size() != n || u_prev.size() != n) throw DimensionMismatch("oifd: vectors must have length N-1");
    if (s.config_.kind != SchemeKind::oifd) throw InvalidArgument("step_oifd needs an oifd stepper");
    const double k = s.config_.k;
    const double r2 = (k / s.grid_.h()) * (k / s.grid_.h());
    const auto& gamma = s.op_.damping();
    const auto& x = s.grid_.interior_nodes();
    const auto b_now = boundary_vector(s.problem_, s.grid_, t);
    const auto b_next = boundary_vector(s.problem_, s.grid_, t + k);

    std::vector<double> rhs(n);
    s.op_.apply_laplacian(u_curr, rhs);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = 2.0 * u_curr[i] + 0.5 * r2 * rhs[i] + (gamma[i] * k / 2.0 - 1.0) * u_prev[i] +
                 0.5 * r2 * (b_next[i] + b_now[i]) + k * k * s.problem_.g(x[i], t);
    }
    s.factorization_->solve_in_place(rhs);
    return rhs;
}

std::vector<double> startup_u1(const DampedWaveProblem& problem, const SpatialGrid& grid, double k) {
    const std::size_t n = grid.n_interior();
    const auto& x = grid.interior_nodes();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    std::vector<double> phi(n + 2);
    phi.front() = problem.phi(grid.a());
    phi.back() = problem.phi(grid.b());
    for (std::size_t i = 0; i < n; ++i) phi[i + 1] = problem.phi(x[i]);

    std::vector<double> u1(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lap = (phi[i] - 2.0 * phi[i + 1] + phi[i + 2]) * inv_h2;
        const double psi = problem.psi(x[i]);
        const double accel = lap - problem.gamma(x[i]) * psi + problem.g(x[i], 0.0);
        u1[i] = phi[i + 1] + k * psi + 0.5 * k * k * accel;
    }
    return u1;
}

const StateVector& Trajectory::nearest(double t) const {
    return *std::min_element(snapshots.begin(), snapshots.end(), [t](const StateVector& a, const StateVector& b) {
        return std::abs(a.t - t) < std::abs(b.t - t);
    });
}

std::size_t step_count(double t_final, double k) {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw InvalidArgument("t_final must be positive (got " + std::to_string(t_final) + ")");
    }
    if (!(k > 0.0)) throw InvalidArgument("time step k must be positive");
    const double ratio = t_final / k;
    if (ratio > static_cast<double>(kMaxSteps)) {
        throw InvalidArgument("t_final / k = " + std::to_string(ratio) + " exceeds the step limit of " +
                              std::to_string(kMaxSteps));
    }
    return static_cast<std::size_t>(std::floor(ratio * (1.0 + 1e-12)));
}

Trajectory solve_evolution(const DampedWaveProblem& problem, const SpatialGrid& grid, const SchemeConfig& config,
                           double t_final, SnapshotPolicy policy) {
    const std::size_t total = step_count(t_final, config.k);
    const Stepper stepper = make_stepper(config, assemble_system(grid, problem), grid, problem);
    const std::size_t n = grid.n_interior();
    const double k = config.k;

    Trajectory traj{.grid = grid, .config = config, .snapshots = {}, .blow_up_step = {}};
    auto keep = [&](std::size_t j) {
        return j == 0 || j == total || (policy.stride != 0 && j % policy.stride == 0);
    };
    auto peak = [&](const StateVector& s) {
        for (std::size_t i = 0; i < n; ++i) traj.peak_magnitude = std::max(traj.peak_magnitude, std::abs(s.values[i]));
    };
    // Records step j; returns false (and flags blow-up) when the state is not finite.
    auto record = [&](std::size_t j, StateVector&& s, StateVector& last_finite) {
        if (!s.finite()) {
            traj.blow_up = true;
            traj.blow_up_step = j;
            if (traj.snapshots.back().t != last_finite.t) traj.snapshots.push_back(last_finite);
            return false;
        }
        traj.steps = j;
        peak(s);
        if (keep(j)) traj.snapshots.push_back(s);
        last_finite = std::move(s);
        return true;
    };

    StateVector current = stepper.initial_state();
    peak(current);
    traj.snapshots.push_back(current);
    if (total == 0) return traj;

    if (config.kind == SchemeKind::semigroup) {
        for (std::size_t j = 1; j <= total; ++j) {
            StateVector prev{static_cast<double>(j - 1) * k, current.values};
            StateVector next = step_semigroup(stepper, prev);
            next.t = static_cast<double>(j) * k;
            if (!record(j, std::move(next), current)) break;
        }
        return traj;
    }

    auto as_state = [&](double t, const std::vector<double>& u, const std::vector<double>& u_prev) {
        StateVector s{t, std::vector<double>(2 * n)};
        for (std::size_t i = 0; i < n; ++i) {
            s.values[i] = u[i];
            s.values[n + i] = (u[i] - u_prev[i]) / k;
        }
        return s;
    };

    std::vector<double> u_prev = stepper.u0();
    std::vector<double> u_curr = stepper.u1();
    if (!record(1, as_state(k, u_curr, u_prev), current)) return traj;
    for (std::size_t j = 2; j <= total; ++j) {
        const double t_now = static_cast<double>(j - 1) * k;
        std::vector<double> u_next = config.kind == SchemeKind::oefd ? step_oefd(stepper, u_curr, u_prev, t_now)
                                                                     : step_oifd(stepper, u_curr, u_prev, t_now);
        if (!record(j, as_state(static_cast<double>(j) * k, u_next, u_curr), current)) break;
        u_prev = std::move(u_curr);
        u_curr = std::move(u_next);
    }
    return traj;
}

}  // namespace dampwave
