#include "dampwave/operators.hpp"

#include "dampwave/error.hpp"

#include <cmath>
#include <string>

namespace dampwave {

SpatialGrid build_grid(double a, double b, int N) {
    if (!(std::isfinite(a) && std::isfinite(b)) || !(b > a)) {
        throw InvalidArgument("grid requires b > a (got a = " + std::to_string(a) +
                              ", b = " + std::to_string(b) + ")");
    }
    if (N < 2) {
        throw InvalidArgument("grid requires N >= 2 subintervals (got " + std::to_string(N) + ")");
    }
    const double h = (b - a) / N;
    std::vector<double> nodes(static_cast<std::size_t>(N - 1));
    for (int i = 1; i < N; ++i) nodes[static_cast<std::size_t>(i - 1)] = a + i * h;
    return SpatialGrid(a, b, N, h, std::move(nodes));
}

BlockOperator::BlockOperator(std::vector<double> damping, double inv_h2)
    : damping_(std::move(damping)), inv_h2_(inv_h2) {
    if (damping_.empty()) throw InvalidArgument("block operator needs at least one interior node");
}

void BlockOperator::apply_laplacian(std::span<const double> u, std::span<double> out) const {
    const std::size_t n = n_interior();
    if (u.size() != n || out.size() != n) throw DimensionMismatch("laplacian: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        double s = -2.0 * u[i];
        if (i > 0) s += u[i - 1];
        if (i + 1 < n) s += u[i + 1];
        out[i] = s;
    }
}

void BlockOperator::apply(std::span<const double> v, std::span<double> out) const {
    const std::size_t n = n_interior();
    if (v.size() != 2 * n || out.size() != 2 * n) {
        throw DimensionMismatch("block operator: expected vectors of length " + std::to_string(2 * n));
    }
    const auto u = v.first(n);
    const auto w = v.subspan(n);
    auto top = out.first(n);
    auto bottom = out.subspan(n);
    apply_laplacian(u, bottom);
    for (std::size_t i = 0; i < n; ++i) {
        top[i] = w[i];
        bottom[i] = inv_h2_ * bottom[i] - damping_[i] * w[i];
    }
}

std::vector<double> BlockOperator::apply(std::span<const double> v) const {
    std::vector<double> out(v.size());
    apply(v, out);
    return out;
}

std::vector<double> BlockOperator::densify() const {
    const std::size_t n = n_interior();
    const std::size_t m = 2 * n;
    std::vector<double> d(m * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        d[i * m + n + i] = 1.0;
        const std::size_t r = n + i;
        d[r * m + i] = -2.0 * inv_h2_;
        if (i > 0) d[r * m + i - 1] = inv_h2_;
        if (i + 1 < n) d[r * m + i + 1] = inv_h2_;
        d[r * m + n + i] = -damping_[i];
    }
    return d;
}

std::vector<double> BlockOperator::densify_laplacian() const {
    const std::size_t n = n_interior();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        d[i * n + i] = -2.0;
        if (i > 0) d[i * n + i - 1] = 1.0;
        if (i + 1 < n) d[i * n + i + 1] = 1.0;
    }
    return d;
}

BlockOperator assemble_system(const SpatialGrid& grid, const DampedWaveProblem& problem) {
    std::vector<double> damping;
    damping.reserve(grid.n_interior());
    for (double x : grid.interior_nodes()) {
        const double g = problem.gamma(x);
        if (!std::isfinite(g) || g < 0.0) {
            throw InvalidArgument("damping must be nonnegative: gamma(" + std::to_string(x) +
                                  ") = " + std::to_string(g));
        }
        damping.push_back(g);
    }
    return BlockOperator(std::move(damping), 1.0 / (grid.h() * grid.h()));
}

std::vector<double> boundary_vector(const DampedWaveProblem& problem, const SpatialGrid& grid, double t) {
    std::vector<double> bvec(grid.n_interior(), 0.0);
    bvec.front() += problem.u_a(t);
    bvec.back() += problem.u_b(t);
    return bvec;
}

void fill_forcing(const DampedWaveProblem& problem, const SpatialGrid& grid, double t,
                  std::span<double> out) {
    const std::size_t n = grid.n_interior();
    if (out.size() != 2 * n) throw DimensionMismatch("forcing vector: size mismatch");
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    const auto& x = grid.interior_nodes();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = 0.0;
        out[n + i] = problem.g(x[i], t);
    }
    out[n] += inv_h2 * problem.u_a(t);
    out[2 * n - 1] += inv_h2 * problem.u_b(t);
}

ForcingVector forcing_vector(const DampedWaveProblem& problem, const SpatialGrid& grid, double t) {
    ForcingVector f{t, std::vector<double>(2 * grid.n_interior())};
    fill_forcing(problem, grid, t, f.values);
    return f;
}

}  // namespace dampwave
