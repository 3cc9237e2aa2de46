#pragma once

#include "dampwave/operators.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dampwave {

/// Exact rational p/q in lowest terms with q > 0.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string to_string() const;

    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator/(Rational a, Rational b);
    friend Rational operator-(Rational a) { return Rational(-a.num_, a.den_); }
    friend bool operator==(const Rational&, const Rational&) = default;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// R_{S,T}(theta) = P_T(theta) / Q_S(theta), the (S,T) Pade approximant of
/// exp(theta): numerator degree T, denominator degree S, and
/// exp(theta) - R_{S,T}(theta) = leading_error * theta^(S+T+1) + ...
struct RationalApproximant {
    int S = 0;
    int T = 0;
    std::vector<Rational> p_coeffs;  // a_0..a_T, a_0 = 1
    std::vector<Rational> q_coeffs;  // b_0..b_S, b_0 = 1
    Rational leading_error;

    std::vector<double> p_double() const;
    std::vector<double> q_double() const;
};

inline constexpr int kMaxPadeOrder = 4;

/// Closed-form exponential Pade coefficients for 0 <= S, T <= 4, S + T >= 1.
RationalApproximant pade_coefficients(int S, int T);

/// P_T(theta) / Q_S(theta). Throws InvalidArgument near a pole
/// (|Q_S(theta)| < 1e-14).
double eval_scalar(const RationalApproximant& approx, double theta);

/// sum_j coeffs[j] (kM)^j v, by Horner's rule over blockwise products.
std::vector<double> apply_poly(std::span<const double> coeffs, const BlockOperator& op, double k,
                               std::span<const double> v);

}  // namespace dampwave
