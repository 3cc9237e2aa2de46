#include <doctest.h>

#include "dampwave/error.hpp"
#include "dampwave/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace dampwave;

namespace {

DampedWaveProblem constant_problem(double a, double b, double gamma) {
    DampedWaveProblem p;
    p.a = a;
    p.b = b;
    p.gamma = [gamma](double) { return gamma; };
    p.g = [](double, double) { return 0.0; };
    p.phi = [](double) { return 0.0; };
    p.psi = [](double) { return 0.0; };
    p.u_a = [](double) { return 0.0; };
    p.u_b = [](double) { return 0.0; };
    return p;
}

}  // namespace

TEST_CASE("build_grid") {
    const double pi = std::numbers::pi;
    SUBCASE("table abscissae") {
        const auto g = build_grid(0.0, pi, 10);
        CHECK(g.h() == doctest::Approx(0.314159265).epsilon(1e-9));
        REQUIRE(g.interior_nodes().size() == 9);
        for (int i = 1; i <= 9; ++i) CHECK(g.interior_nodes()[i - 1] == doctest::Approx(i * pi / 10).epsilon(1e-15));
        CHECK(g.node(0) == 0.0);
        CHECK(g.node(10) == pi);
    }
    SUBCASE("smallest grid") {
        const auto g = build_grid(0.0, 1.0, 2);
        CHECK(g.h() == 0.5);
        REQUIRE(g.n_interior() == 1);
        CHECK(g.interior_nodes()[0] == 0.5);
    }
    SUBCASE("N = 50") {
        const auto g = build_grid(0.0, pi, 50);
        CHECK(g.h() == doctest::Approx(pi / 50));
        CHECK(g.n_interior() == 49);
        for (std::size_t i = 0; i < 49; ++i) CHECK(g.interior_nodes()[i] == doctest::Approx((i + 1) * pi / 50));
    }
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 1), InvalidArgument);
    CHECK_THROWS_AS(build_grid(1.0, 1.0, 4), InvalidArgument);
    CHECK_THROWS_AS(build_grid(2.0, 1.0, 4), InvalidArgument);
}

TEST_CASE("assemble_system stencil") {
    const auto p = constant_problem(0.0, 1.0, 3.0);
    SUBCASE("N = 3") {
        const auto op = assemble_system(build_grid(0.0, 1.0, 3), p);
        const auto A = op.densify_laplacian();
        CHECK(A == std::vector<double>{-2, 1, 1, -2});
        Eigen::Matrix2d m;
        m << A[0], A[1], A[2], A[3];
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
        CHECK(es.eigenvalues()(0) == doctest::Approx(-3.0));
        CHECK(es.eigenvalues()(1) == doctest::Approx(-1.0));
        CHECK(-4 * std::pow(std::sin(std::numbers::pi / 6), 2) == doctest::Approx(-1.0));
        CHECK(-4 * std::pow(std::sin(2 * std::numbers::pi / 6), 2) == doctest::Approx(-3.0));
    }
    SUBCASE("N = 2") {
        const auto op = assemble_system(build_grid(0.0, 1.0, 2), p);
        CHECK(op.densify_laplacian() == std::vector<double>{-2});
        CHECK(op.damping() == std::vector<double>{3.0});
        // M = [[0, 1], [-2/h^2, -gamma]]
        CHECK(op.densify() == std::vector<double>{0, 1, -8, -3});
    }
    SUBCASE("negative damping rejected") {
        auto q = p;
        q.gamma = [](double x) { return x - 0.5; };
        CHECK_THROWS_AS(assemble_system(build_grid(0.0, 1.0, 4), q), InvalidArgument);
    }
}

TEST_CASE("Laplacian spectrum matches the sine formula") {
    for (int N = 2; N <= 20; ++N) {
        const auto op = assemble_system(build_grid(0.0, 1.0, N), constant_problem(0.0, 1.0, 1.0));
        const auto A = op.densify_laplacian();
        const auto n = static_cast<Eigen::Index>(N - 1);
        Eigen::MatrixXd m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            A.data(), n, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        std::vector<double> expected;
        for (int j = 1; j < N; ++j) expected.push_back(-4 * std::pow(std::sin(j * std::numbers::pi / (2.0 * N)), 2));
        std::sort(expected.begin(), expected.end());
        for (Eigen::Index j = 0; j < n; ++j) CHECK(std::abs(es.eigenvalues()(j) - expected[j]) < 1e-10);
    }
}

TEST_CASE("blockwise matvec equals dense product") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int N = 2; N <= 20; ++N) {
        DampedWaveProblem p = constant_problem(0.0, 2.0, 0.0);
        p.gamma = [](double x) { return 1.0 + x * x; };
        const auto op = assemble_system(build_grid(0.0, 2.0, N), p);
        const std::size_t n = op.state_size();
        const auto dense = op.densify();
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> v(n);
            for (double& e : v) e = unif(rng);
            const auto block = op.apply(v);
            double scale = 0.0, diff = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += dense[i * n + j] * v[j];
                diff = std::max(diff, std::abs(acc - block[i]));
                scale = std::max(scale, std::abs(acc));
            }
            CHECK(diff <= 1e-13 * scale);
        }
    }
}

TEST_CASE("forcing_vector") {
    SUBCASE("sample-style zero data") {
        const auto p = constant_problem(0.0, std::numbers::pi, 2.0);
        const auto g = build_grid(0.0, std::numbers::pi, 10);
        for (double t : {0.0, 0.3, 6.0}) {
            const auto f = forcing_vector(p, g, t);
            CHECK(f.values.size() == 18);
            CHECK(std::all_of(f.values.begin(), f.values.end(), [](double v) { return v == 0.0; }));
        }
    }
    SUBCASE("boundary placement") {
        auto p = constant_problem(0.0, 1.5, 0.0);
        p.u_a = [](double) { return 1.0; };
        const auto f = forcing_vector(p, build_grid(0.0, 1.5, 3), 0.0);
        CHECK(f.values == std::vector<double>{0, 0, 4, 0});
    }
    SUBCASE("source term") {
        auto p = constant_problem(0.0, 1.0, 0.0);
        p.g = [](double x, double t) { return x * t; };
        const auto f = forcing_vector(p, build_grid(0.0, 1.0, 3), 2.0);
        CHECK(f.values[0] == 0.0);
        CHECK(f.values[1] == 0.0);
        CHECK(f.values[2] == doctest::Approx(2.0 / 3));
        CHECK(f.values[3] == doctest::Approx(4.0 / 3));
    }
    SUBCASE("N = 2 sums both boundary values") {
        auto p = constant_problem(0.0, 1.0, 0.0);
        p.u_a = [](double) { return 1.0; };
        p.u_b = [](double) { return 2.0; };
        const auto f = forcing_vector(p, build_grid(0.0, 1.0, 2), 0.0);
        CHECK(f.values[1] == doctest::Approx(12.0));
    }
    SUBCASE("linear in the data") {
        auto p = constant_problem(0.0, 1.0, 0.0);
        p.g = [](double x, double t) { return std::sin(x + t); };
        p.u_a = [](double t) { return std::cos(t); };
        p.u_b = [](double t) { return 1.0 + t; };
        const double alpha = -2.75;
        auto q = p;
        q.g = [&](double x, double t) { return alpha * p.g(x, t); };
        q.u_a = [&](double t) { return alpha * p.u_a(t); };
        q.u_b = [&](double t) { return alpha * p.u_b(t); };
        const auto grid = build_grid(0.0, 1.0, 7);
        const auto f = forcing_vector(p, grid, 0.4);
        const auto fq = forcing_vector(q, grid, 0.4);
        for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(fq.values[i] == doctest::Approx(alpha * f.values[i]));
    }
}
