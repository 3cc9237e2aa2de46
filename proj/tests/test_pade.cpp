#include <doctest.h>

#include "dampwave/error.hpp"
#include "dampwave/pade.hpp"

#include <cmath>
#include <random>

using namespace dampwave;

namespace {

Rational factorial(int n) {
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return Rational(f);
}

// Taylor coefficients of P/Q by series division, through degree `order`.
std::vector<Rational> series(const RationalApproximant& r, int order) {
    std::vector<Rational> c(order + 1);
    for (int j = 0; j <= order; ++j) {
        Rational acc = j <= r.T ? r.p_coeffs[j] : Rational(0);
        for (int i = 1; i <= std::min(j, r.S); ++i) acc = acc - r.q_coeffs[i] * c[j - i];
        c[j] = acc;
    }
    return c;
}

DampedWaveProblem random_problem(double gamma) {
    DampedWaveProblem p;
    p.a = 0.0;
    p.b = 1.0;
    p.gamma = [gamma](double x) { return gamma * (1.0 + x); };
    p.g = [](double, double) { return 0.0; };
    p.phi = p.psi = [](double) { return 0.0; };
    p.u_a = p.u_b = [](double) { return 0.0; };
    return p;
}

}  // namespace

TEST_CASE("rational arithmetic") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -3) == Rational(-1, 3));
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
    CHECK(Rational(1, 2) / Rational(-1, 4) == Rational(-2));
    CHECK(Rational(-1, 12).to_string() == "-1/12");
    CHECK(Rational(3).to_string() == "3");
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("golden table rows") {
    const auto r11 = pade_coefficients(1, 1);
    CHECK(r11.p_coeffs == std::vector<Rational>{1, Rational(1, 2)});
    CHECK(r11.q_coeffs == std::vector<Rational>{1, Rational(-1, 2)});
    CHECK(r11.leading_error == Rational(-1, 12));

    const auto r01 = pade_coefficients(0, 1);
    CHECK(r01.p_coeffs == std::vector<Rational>{1, 1});
    CHECK(r01.q_coeffs == std::vector<Rational>{1});
    CHECK(r01.leading_error == Rational(1, 2));

    const auto r02 = pade_coefficients(0, 2);
    CHECK(r02.p_coeffs == std::vector<Rational>{1, 1, Rational(1, 2)});
    CHECK(r02.leading_error == Rational(1, 6));

    const auto r10 = pade_coefficients(1, 0);
    CHECK(r10.p_coeffs == std::vector<Rational>{1});
    CHECK(r10.q_coeffs == std::vector<Rational>{1, -1});
    CHECK(r10.leading_error == Rational(-1, 2));
}

TEST_CASE("series match and leading error for every supported order") {
    for (int S = 0; S <= kMaxPadeOrder; ++S) {
        for (int T = 0; T <= kMaxPadeOrder; ++T) {
            if (S + T < 1) continue;
            CAPTURE(S);
            CAPTURE(T);
            const auto r = pade_coefficients(S, T);
            REQUIRE(r.p_coeffs.size() == static_cast<std::size_t>(T + 1));
            REQUIRE(r.q_coeffs.size() == static_cast<std::size_t>(S + 1));
            CHECK(r.p_coeffs[0] == Rational(1));
            CHECK(r.q_coeffs[0] == Rational(1));
            const int order = S + T + 1;
            const auto c = series(r, order);
            for (int j = 0; j < order; ++j) CHECK(c[j] == Rational(1) / factorial(j));
            CHECK(r.leading_error == Rational(1) / factorial(order) - c[order]);
        }
    }
}

TEST_CASE("pade_coefficients rejects unsupported orders") {
    CHECK_THROWS_AS(pade_coefficients(0, 0), InvalidArgument);
    CHECK_THROWS_AS(pade_coefficients(5, 1), InvalidArgument);
    CHECK_THROWS_AS(pade_coefficients(1, -1), InvalidArgument);
}

TEST_CASE("eval_scalar") {
    const auto r11 = pade_coefficients(1, 1);
    CHECK(eval_scalar(r11, 0.0) == 1.0);
    CHECK(eval_scalar(r11, 1.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(eval_scalar(r11, 2.0), InvalidArgument);
    const auto r01 = pade_coefficients(0, 1);
    const double err = std::abs(eval_scalar(r01, 0.1) - std::exp(0.1));
    CHECK(err == doctest::Approx(0.00517).epsilon(0.01));
    CHECK(err == doctest::Approx(0.005).epsilon(0.05));

    for (auto [S, T] : {std::pair{0, 1}, {0, 2}, {1, 0}, {1, 1}}) {
        const auto r = pade_coefficients(S, T);
        for (double theta : {0.1, -0.1, 0.01, -0.01}) {
            const double actual = std::abs(std::exp(theta) - eval_scalar(r, theta));
            const double predicted = std::abs(r.leading_error.to_double()) * std::pow(std::abs(theta), S + T + 1);
            CHECK(actual / predicted < 1.5);
            CHECK(actual / predicted > 1.0 / 1.5);
        }
    }
}

TEST_CASE("apply_poly") {
    const auto op = assemble_system(build_grid(0.0, 1.0, 3), random_problem(2.0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(4);
    for (double& e : v) e = unif(rng);

    const std::vector<double> one{1.0};
    CHECK(apply_poly(one, op, 0.7, v) == v);
    const std::vector<double> lin{1.0, 1.0};
    CHECK(apply_poly(lin, op, 0.0, v) == v);

    // dense I + kM/2 for the (1,1) numerator
    const double k = 0.3;
    const auto M = op.densify();
    const auto p = pade_coefficients(1, 1).p_double();
    const auto got = apply_poly(p, op, k, v);
    for (std::size_t i = 0; i < 4; ++i) {
        double acc = v[i];
        for (std::size_t j = 0; j < 4; ++j) acc += 0.5 * k * M[i * 4 + j] * v[j];
        CHECK(std::abs(got[i] - acc) <= 1e-13 * (1.0 + std::abs(acc)));
    }

    // cubic against dense powers
    const std::vector<double> cubic{0.5, -1.0, 0.25, 2.0};
    std::vector<double> power = v, expected(4, 0.0);
    for (std::size_t d = 0; d < cubic.size(); ++d) {
        for (std::size_t i = 0; i < 4; ++i) expected[i] += cubic[d] * power[i];
        std::vector<double> next(4, 0.0);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) next[i] += k * M[i * 4 + j] * power[j];
        power = next;
    }
    const auto cub = apply_poly(cubic, op, k, v);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(cub[i] - expected[i]) <= 1e-13 * (1.0 + std::abs(expected[i])));

    // linear in v
    std::vector<double> w(4), combo(4);
    for (double& e : w) e = unif(rng);
    for (std::size_t i = 0; i < 4; ++i) combo[i] = 2.0 * v[i] - 3.0 * w[i];
    const auto pv = apply_poly(cubic, op, k, v), pw = apply_poly(cubic, op, k, w), pc = apply_poly(cubic, op, k, combo);
    for (std::size_t i = 0; i < 4; ++i) CHECK(pc[i] == doctest::Approx(2.0 * pv[i] - 3.0 * pw[i]));

    const std::vector<double> short_v(3, 0.0);
    CHECK_THROWS_AS(apply_poly(cubic, op, k, short_v), DimensionMismatch);
}
