#include "dampwave/pade.hpp"

#include "dampwave/error.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

namespace dampwave {

namespace {

std::int64_t factorial(int n) {
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double horner(const std::vector<Rational>& c, double theta) {
    double s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * theta + it->to_double();
    return s;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw InvalidArgument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = g ? num / g : 0;
    den_ = g ? den / g : 1;
}

Rational operator+(Rational a, Rational b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    return Rational(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_);
}

Rational operator-(Rational a, Rational b) { return a + (-b); }

Rational operator*(Rational a, Rational b) {
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    const std::int64_t s1 = g1 ? g1 : 1;
    const std::int64_t s2 = g2 ? g2 : 1;
    return Rational((a.num_ / s1) * (b.num_ / s2), (a.den_ / s2) * (b.den_ / s1));
}

Rational operator/(Rational a, Rational b) {
    if (b.num_ == 0) throw InvalidArgument("rational division by zero");
    return a * Rational(b.den_, b.num_);
}

std::string Rational::to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

std::vector<double> RationalApproximant::p_double() const {
    std::vector<double> out;
    for (const auto& c : p_coeffs) out.push_back(c.to_double());
    return out;
}

std::vector<double> RationalApproximant::q_double() const {
    std::vector<double> out;
    for (const auto& c : q_coeffs) out.push_back(c.to_double());
    return out;
}

RationalApproximant pade_coefficients(int S, int T) {
    if (S < 0 || T < 0 || S > kMaxPadeOrder || T > kMaxPadeOrder || S + T < 1) {
        throw InvalidArgument("Pade order (" + std::to_string(S) + "," + std::to_string(T) +
                              ") outside supported range 0..4 with S+T >= 1");
    }
    const int n = S + T;
    RationalApproximant r;
    r.S = S;
    r.T = T;
    // a_j = (S+T-j)! T! / ((S+T)! j! (T-j)!)
    for (int j = 0; j <= T; ++j) {
        r.p_coeffs.emplace_back(factorial(n - j) * factorial(T),
                                factorial(n) * factorial(j) * factorial(T - j));
    }
    // b_j = (-1)^j (S+T-j)! S! / ((S+T)! j! (S-j)!)
    for (int j = 0; j <= S; ++j) {
        const std::int64_t sign = (j % 2) ? -1 : 1;
        r.q_coeffs.emplace_back(sign * factorial(n - j) * factorial(S),
                                factorial(n) * factorial(j) * factorial(S - j));
    }
    // c_{S+T+1} = (-1)^S S! T! / ((S+T)! (S+T+1)!)
    const std::int64_t sign = (S % 2) ? -1 : 1;
    r.leading_error = Rational(sign * factorial(S) * factorial(T), factorial(n) * factorial(n + 1));
    return r;
}

double eval_scalar(const RationalApproximant& approx, double theta) {
    const double q = horner(approx.q_coeffs, theta);
    if (std::abs(q) < 1e-14) {
        throw InvalidArgument("Pade approximant has a pole near theta = " + std::to_string(theta));
    }
    return horner(approx.p_coeffs, theta) / q;
}

std::vector<double> apply_poly(std::span<const double> coeffs, const BlockOperator& op, double k,
                               std::span<const double> v) {
    if (v.size() != op.state_size()) {
        throw DimensionMismatch("apply_poly: vector length " + std::to_string(v.size()) +
                                " does not match operator size " + std::to_string(op.state_size()));
    }
    if (coeffs.empty()) return std::vector<double>(v.size(), 0.0);

    std::vector<double> acc(v.size());
    std::vector<double> tmp(v.size());
    const double top = coeffs.back();
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] = top * v[i];
    for (std::size_t j = coeffs.size() - 1; j-- > 0;) {
        op.apply(acc, tmp);
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] = k * tmp[i] + coeffs[j] * v[i];
    }
    return acc;
}

}  // namespace dampwave
