#include <doctest.h>

#include "dampwave/error.hpp"
#include "dampwave/linalg.hpp"
#include "dampwave/problems.hpp"
#include "dampwave/schemes.hpp"
#include "dampwave/stability.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

using namespace dampwave;
using namespace dampwave::linalg;

namespace {

double residual(const BandedMatrix& a, std::span<const double> x, std::span<const double> b) {
    const auto ax = a.multiply(x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        num += (ax[i] - b[i]) * (ax[i] - b[i]);
        den += b[i] * b[i];
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

}  // namespace

TEST_CASE("banded LU examples") {
    SUBCASE("identity") {
        const auto f = lu_factor_banded(BandedMatrix::identity(5));
        const std::vector<double> rhs{1, -2, 3, 4.5, 0};
        CHECK(f.solve(rhs) == rhs);
    }
    SUBCASE("tridiagonal round trip") {
        BandedMatrix a(4, 1, 1);
        for (std::size_t i = 0; i < 4; ++i) {
            a.at(i, i) = -2;
            if (i > 0) a.at(i, i - 1) = 1;
            if (i < 3) a.at(i, i + 1) = 1;
        }
        const std::vector<double> x{1, 2, 3, 4};
        const auto sol = solve_banded(lu_factor_banded(a), a.multiply(x));
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(sol[i] - x[i]) < 1e-12);
    }
    SUBCASE("singular") {
        BandedMatrix a(2, 1, 1);
        a.at(0, 0) = a.at(0, 1) = a.at(1, 0) = a.at(1, 1) = 1;
        CHECK_THROWS_AS(lu_factor_banded(a), SingularMatrix);
    }
    SUBCASE("size one") {
        BandedMatrix a(1, 0, 0);
        a.at(0, 0) = 2;
        CHECK(lu_factor_banded(a).solve(std::vector<double>{6})[0] == 3.0);
    }
    SUBCASE("zero rhs") {
        BandedMatrix a(3, 1, 0);
        a.at(0, 0) = a.at(1, 1) = a.at(2, 2) = 4;
        a.at(1, 0) = a.at(2, 1) = 1;
        CHECK(lu_factor_banded(a).solve(std::vector<double>(3, 0.0)) == std::vector<double>(3, 0.0));
    }
    SUBCASE("dimension mismatch") {
        const auto f = lu_factor_banded(BandedMatrix::identity(3));
        CHECK_THROWS_AS(f.solve(std::vector<double>(2, 1.0)), DimensionMismatch);
    }
}

TEST_CASE("random tridiagonal system of size 50") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    BandedMatrix a(50, 1, 1);
    for (std::size_t i = 0; i < 50; ++i) {
        double off = 0.0;
        if (i > 0) off += std::abs(a.at(i, i - 1) = unif(rng));
        if (i < 49) off += std::abs(a.at(i, i + 1) = unif(rng));
        a.at(i, i) = (unif(rng) > 0 ? 1 : -1) * (off + 0.5 + std::abs(unif(rng)));
    }
    std::vector<double> b(50);
    for (double& e : b) e = unif(rng);
    CHECK(residual(a, lu_factor_banded(a).solve(b), b) < 1e-11);
}

TEST_CASE("random banded round trips need pivoting too") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> size(1, 100), band(0, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = size(rng);
        const std::size_t kl = band(rng), ku = band(rng);
        BandedMatrix a(n, kl, ku);
        const bool dominant = trial % 2 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            double off = 0.0;
            for (std::size_t j = (i > kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
                if (j == i) continue;
                off += std::abs(a.at(i, j) = unif(rng));
            }
            a.at(i, i) = dominant ? off + 1.0 : 0.2 * unif(rng);
        }
        std::vector<double> b(n);
        for (double& e : b) e = unif(rng);
        try {
            const auto f = lu_factor_banded(a);
            const auto x = f.solve(b);
            if (dominant) {
                CHECK(residual(a, x, b) < 1e-10);
            } else {
                // backward error, scaled by |A| |x|
                const auto dense = a.densify();
                Eigen::MatrixXd ea = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                    dense.data(), n, n);
                const Eigen::VectorXd ex = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
                const Eigen::VectorXd eb = Eigen::Map<const Eigen::VectorXd>(b.data(), n);
                const double backward = (ea * ex - eb).norm() / (ea.norm() * ex.norm() + eb.norm());
                CHECK(backward < 1e-12);
                const Eigen::VectorXd ref = ea.partialPivLu().solve(eb);
                const double cond = ea.norm() * ea.inverse().norm();
                if (cond < 1e8) CHECK((ex - ref).norm() <= 1e-14 * cond * ref.norm() + 1e-300);
            }
        } catch (const SingularMatrix&) {
            CHECK_FALSE(dominant);
        }
    }
}

TEST_CASE("concurrent solves share one factorization") {
    BandedMatrix a(30, 2, 1);
    for (std::size_t i = 0; i < 30; ++i) {
        a.at(i, i) = 5.0;
        if (i > 0) a.at(i, i - 1) = 1.0;
        if (i > 1) a.at(i, i - 2) = -1.0;
        if (i < 29) a.at(i, i + 1) = 2.0;
    }
    const auto f = lu_factor_banded(a);
    std::vector<std::vector<double>> out(8);
    {
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < 8; ++t) {
            threads.emplace_back([&, t] {
                std::vector<double> b(30, static_cast<double>(t + 1));
                out[t] = f.solve(b);
            });
        }
    }
    for (std::size_t t = 0; t < 8; ++t) CHECK(residual(a, out[t], std::vector<double>(30, t + 1.0)) < 1e-12);
}

TEST_CASE("interleaved operator matches M") {
    const auto p = builtin_problem("manufactured");
    const auto grid = build_grid(p.a, p.b, 7);
    const auto op = assemble_system(grid, p);
    const auto band = interleaved_operator(op);
    CHECK(band.lower() == 3);
    CHECK(band.upper() == 1);
    const std::size_t n = op.state_size();
    std::vector<double> v(n), vi(n), back(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(1.0 + i);
    interleave(v, vi);
    const auto mv = op.apply(v);
    const auto mvi = band.multiply(vi);
    deinterleave(mvi, back);
    for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(mv[i]).epsilon(1e-14));
}

TEST_CASE("matrix_exponential") {
    SUBCASE("k = 0 is the identity") {
        const auto op = assemble_system(build_grid(0.0, std::numbers::pi, 6), sample_problem());
        const auto e = matrix_exponential(op, 0.0);
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = 0; j < e.size(); ++j) CHECK(e(i, j) == (i == j ? 1.0 : 0.0));
    }
    SUBCASE("diagonal") {
        for (double k : {0.1, 1.0, 7.5}) {
            const std::vector<double> d{-k, -2 * k};
            const auto e = matrix_exponential(DenseMatrix::diagonal(d));
            CHECK(e(0, 0) == doctest::Approx(std::exp(-k)).epsilon(1e-13));
            CHECK(e(1, 1) == doctest::Approx(std::exp(-2 * k)).epsilon(1e-13));
            CHECK(e(0, 1) == 0.0);
        }
    }
    SUBCASE("semigroup law") {
        const auto op = assemble_system(build_grid(0.0, std::numbers::pi, 6), sample_problem());
        const auto lhs = matrix_exponential(op, 0.5);
        const auto rhs = matrix_exponential(op, 0.3) * matrix_exponential(op, 0.2);
        CHECK((lhs - rhs).norm_frobenius() < 1e-10);
    }
    SUBCASE("semigroup law across random operators") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int trial = 0; trial < 30; ++trial) {
            const int N = 3 + trial % 8;
            const double gamma = 5.0 * unif(rng);
            auto p = sample_problem();
            p.gamma = [gamma](double x) { return gamma * (1 + std::sin(x)) / 2; };
            const auto op = assemble_system(build_grid(0.0, 1.0, N), p);
            const double norm = DenseMatrix(op.state_size(), op.densify()).norm1();
            const double t = 5.0 / norm * unif(rng), k = 5.0 / norm * unif(rng);
            const auto lhs = matrix_exponential(op, t + k);
            const auto rhs = matrix_exponential(op, t) * matrix_exponential(op, k);
            CHECK((lhs - rhs).norm_frobenius() < 1e-9 * std::max(1.0, lhs.norm_frobenius()));
        }
    }
    SUBCASE("agrees with Eigen") {
        auto p = builtin_problem("manufactured");
        const auto op = assemble_system(build_grid(p.a, p.b, 8), p);
        const auto n = static_cast<Eigen::Index>(op.state_size());
        const auto m = op.densify();
        Eigen::MatrixXd em = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                                 m.data(), n, n) *
                             0.05;
        const Eigen::MatrixXd ref = em.exp();
        const auto ours = matrix_exponential(op, 0.05);
        double diff = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) diff = std::max(diff, std::abs(ours(i, j) - ref(i, j)));
        CHECK(diff < 1e-12 * ref.cwiseAbs().maxCoeff());
    }
    SUBCASE("oversize rejected") {
        const auto op = assemble_system(build_grid(0.0, 1.0, 102), sample_problem());
        CHECK_THROWS_AS(matrix_exponential(op, 0.1), InvalidArgument);
    }
}

TEST_CASE("spectral_radius") {
    SUBCASE("identity") {
        const auto est = spectral_radius([](std::span<const double> in, std::span<double> out) {
            std::copy(in.begin(), in.end(), out.begin());
        }, 6);
        CHECK(est.converged);
        CHECK(est.value == doctest::Approx(1.0));
    }
    SUBCASE("diagonal {0.5, -0.9}") {
        const auto est = spectral_radius([](std::span<const double> in, std::span<double> out) {
            out[0] = 0.5 * in[0];
            out[1] = -0.9 * in[1];
        }, 2);
        CHECK(est.converged);
        CHECK(est.value == doctest::Approx(0.9).epsilon(1e-6));
    }
    SUBCASE("rotation-scaled pair") {
        const double rho = 0.8, th = 0.7;
        const auto est = spectral_radius([&](std::span<const double> in, std::span<double> out) {
            out[0] = rho * (std::cos(th) * in[0] - std::sin(th) * in[1]);
            out[1] = rho * (std::sin(th) * in[0] + std::cos(th) * in[1]);
            out[2] = 0.3 * in[2];
        }, 3);
        CHECK(est.converged);
        CHECK(est.value == doctest::Approx(rho).epsilon(1e-6));
    }
    SUBCASE("known spectrum under random orthogonal conjugation") {
        std::mt19937_64 rng(17);
        std::normal_distribution<double> normal;
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 3 + trial % 6;
            Eigen::MatrixXd g(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
            const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
            Eigen::VectorXd d(n);
            for (int i = 0; i < n; ++i) d(i) = 0.5 * (i + 1) / n * (i % 2 ? -1 : 1);
            d(n - 1) = (trial % 2 ? -1.0 : 1.0) * 1.3;
            const Eigen::MatrixXd a = q * d.asDiagonal() * q.transpose();
            const auto est = spectral_radius([&](std::span<const double> in, std::span<double> out) {
                Eigen::Map<Eigen::VectorXd>(out.data(), n) =
                    a * Eigen::Map<const Eigen::VectorXd>(in.data(), n);
            }, n, 100 + trial);
            CHECK(est.converged);
            CHECK(std::abs(est.value - 1.3) <= 1e-5 * 1.3);
        }
    }
    SUBCASE("FD-(1,1) amplification on the sample problem") {
        auto p = sample_problem();
        const auto grid = build_grid(p.a, p.b, 10);
        const auto st = make_stepper(SchemeConfig::fd11(0.05), assemble_system(grid, p), grid, p);
        const auto est = spectral_radius([&](std::span<const double> in, std::span<double> out) {
            const auto next = step_semigroup(st, StateVector{0.0, {in.begin(), in.end()}});
            std::copy(next.values.begin(), next.values.end(), out.begin());
        }, st.op().state_size(), 42);
        const auto spec = stability::implicit_amplification(10, grid.h(), 0.05, 2.0);
        CHECK(est.value <= 1.0 + 1e-8);
        CHECK(est.value == doctest::Approx(spec.max_modulus).epsilon(1e-4));
    }
    SUBCASE("seeded runs repeat") {
        auto map = [](std::span<const double> in, std::span<double> out) {
            for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * (1.0 - 0.1 * i) + (i ? 0.2 * in[i - 1] : 0.0);
        };
        const auto a = spectral_radius(map, 5, 9), b = spectral_radius(map, 5, 9);
        CHECK(a.value == b.value);
        CHECK(a.iterations == b.iterations);
    }
}

TEST_CASE("dense solve") {
    DenseMatrix a(3, {0, 2, 1, 1, 1, 0, 3, 0, 1});
    const std::vector<double> x{1, -1, 2};
    const auto sol = solve_dense(a, a.multiply(x));
    for (std::size_t i = 0; i < 3; ++i) CHECK(sol[i] == doctest::Approx(x[i]));
}
