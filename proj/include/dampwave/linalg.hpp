#pragma once

#include "dampwave/operators.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dampwave::linalg {

/// Square matrix with `lower` sub- and `upper` super-diagonals, stored by
/// rows: row i keeps columns i-lower .. i+upper.
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper);

    static BandedMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    std::size_t lower() const { return kl_; }
    std::size_t upper() const { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const {
        return j + kl_ >= i && j <= i + ku_;
    }
    double operator()(std::size_t i, std::size_t j) const {
        return in_band(i, j) ? data_[index(i, j)] : 0.0;
    }
    double& at(std::size_t i, std::size_t j);

    std::vector<double> multiply(std::span<const double> x) const;
    double max_abs() const;
    std::vector<double> densify() const;

private:
    std::size_t index(std::size_t i, std::size_t j) const { return i * (kl_ + ku_ + 1) + (j + kl_ - i); }

    std::size_t n_;
    std::size_t kl_;
    std::size_t ku_;
    std::vector<double> data_;
};

BandedMatrix operator*(const BandedMatrix& a, const BandedMatrix& b);
/// alpha * a + beta * I
BandedMatrix axpy_identity(double alpha, const BandedMatrix& a, double beta);

/// LU with partial pivoting, confined to the band (fill-in widens the upper
/// band to lower + upper). Immutable; concurrent solves are safe.
class BandedFactorization {
public:
    std::size_t size() const { return n_; }
    std::size_t bandwidth() const { return kl_ + ku_; }

    std::vector<double> solve(std::span<const double> rhs) const;
    void solve_in_place(std::span<double> x) const;

private:
    friend BandedFactorization lu_factor_banded(const BandedMatrix& m);
    BandedFactorization() = default;

    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::size_t width_ = 0;        // kl + ku + 1 entries of U per row
    std::vector<double> upper_;    // row i holds U(i, i .. i+kl+ku)
    std::vector<double> lower_;    // column c holds the kl multipliers below the pivot
    std::vector<std::size_t> pivots_;
};

/// Throws SingularMatrix when a pivot falls below 1e-14 times the largest
/// initial entry magnitude.
BandedFactorization lu_factor_banded(const BandedMatrix& m);

std::vector<double> solve_banded(const BandedFactorization& fact, std::span<const double> rhs);

/// M in interleaved ordering (u_1, v_1, u_2, v_2, ...): three sub-diagonals,
/// one super-diagonal.
BandedMatrix interleaved_operator(const BlockOperator& op);

/// [u; v] -> (u_1, v_1, u_2, v_2, ...) and back.
void interleave(std::span<const double> blocked, std::span<double> interleaved);
void deinterleave(std::span<const double> interleaved, std::span<double> blocked);

/// Row-major dense square matrix, for oracles and small problems.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
    DenseMatrix(std::size_t n, std::vector<double> row_major);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> d);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const std::vector<double>& data() const { return data_; }

    std::vector<double> multiply(std::span<const double> x) const;
    double norm1() const;
    double norm_frobenius() const;

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
    friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
    friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
    friend DenseMatrix operator*(double s, const DenseMatrix& a);

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Solves a X = b column by column with partially pivoted dense LU.
DenseMatrix solve_dense(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> solve_dense(const DenseMatrix& a, std::span<const double> b);

inline constexpr std::size_t kMaxExponentialSize = 200;

/// exp(a) by scaling and squaring with the diagonal (8,8) Pade approximant.
DenseMatrix matrix_exponential(const DenseMatrix& a);

/// exp(M k) for a block operator with state size at most 200.
DenseMatrix matrix_exponential(const BlockOperator& op, double k);

using LinearMap = std::function<void(std::span<const double> in, std::span<double> out)>;

struct SpectralEstimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Dominant eigenvalue modulus by power iteration from a seeded random
/// start. Each iterate is fitted against both a single real eigenvalue and
/// a conjugate pair, so complex-dominant maps converge too. Non-convergence
/// at the iteration cap is reported in the result, not thrown.
SpectralEstimate spectral_radius(const LinearMap& apply, std::size_t n, std::uint64_t seed = 1,
                                 double rel_tol = 1e-6, int max_iterations = 10000);

}  // namespace dampwave::linalg
