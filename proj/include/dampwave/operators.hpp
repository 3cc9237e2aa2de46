#pragma once

#include "dampwave/problems.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dampwave {

/// Uniform mesh a = x_0 < x_1 < ... < x_N = b. Only the N-1 interior nodes
/// carry unknowns.
class SpatialGrid {
public:
    double a() const { return a_; }
    double b() const { return b_; }
    int N() const { return n_; }
    double h() const { return h_; }
    std::size_t n_interior() const { return static_cast<std::size_t>(n_ - 1); }
    const std::vector<double>& interior_nodes() const { return nodes_; }

    /// x_i = a + i h for i = 0..N, endpoints included.
    double node(int i) const { return i == n_ ? b_ : a_ + i * h_; }

private:
    friend SpatialGrid build_grid(double a, double b, int N);
    SpatialGrid(double a, double b, int n, double h, std::vector<double> nodes)
        : a_(a), b_(b), n_(n), h_(h), nodes_(std::move(nodes)) {}

    double a_;
    double b_;
    int n_;
    double h_;
    std::vector<double> nodes_;
};

/// Requires b > a and N >= 2.
SpatialGrid build_grid(double a, double b, int N);

/// Blockwise form of the semi-discrete operator
///
///     M = [ 0        I     ]
///         [ A / h^2  -Gamma ]
///
/// with A = tridiag(1, -2, 1) and Gamma = diag(gamma(x_i)), both of size
/// (N-1) x (N-1). M itself is never formed outside of test utilities.
class BlockOperator {
public:
    BlockOperator(std::vector<double> damping, double inv_h2);

    std::size_t n_interior() const { return damping_.size(); }
    std::size_t state_size() const { return 2 * damping_.size(); }
    double inv_h2() const { return inv_h2_; }
    const std::vector<double>& damping() const { return damping_; }

    /// out = M v.
    void apply(std::span<const double> v, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> v) const;

    /// out = A u (the unscaled tridiagonal stencil with zero boundary values).
    void apply_laplacian(std::span<const double> u, std::span<double> out) const;

    /// Dense row-major copy of M. Test and oracle use only.
    std::vector<double> densify() const;

    /// Dense row-major copy of A.
    std::vector<double> densify_laplacian() const;

private:
    std::vector<double> damping_;
    double inv_h2_;
};

/// Samples gamma at the interior nodes. Throws InvalidArgument if any
/// sample is negative or non-finite.
BlockOperator assemble_system(const SpatialGrid& grid, const DampedWaveProblem& problem);

/// F(t) = [0; G(t) + B(t)/h^2] where G holds g(x_i, t) and B carries
/// u_a(t), u_b(t) in its first and last entries.
struct ForcingVector {
    double t = 0.0;
    std::vector<double> values;
};

ForcingVector forcing_vector(const DampedWaveProblem& problem, const SpatialGrid& grid, double t);

/// In-place form used by time steppers; out must have length 2(N-1).
void fill_forcing(const DampedWaveProblem& problem, const SpatialGrid& grid, double t,
                  std::span<double> out);

/// B(t): boundary values placed at the first and last interior positions.
std::vector<double> boundary_vector(const DampedWaveProblem& problem, const SpatialGrid& grid, double t);

}  // namespace dampwave
