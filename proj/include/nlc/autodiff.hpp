#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlc {

using Vec = std::vector<double>;

/// Forward-mode dual number carrying one directional derivative.
struct Dual {
    double value = 0.0;
    double deriv = 0.0;

    constexpr Dual() = default;
    constexpr Dual(double v) : value(v) {}  // NOLINT: constants promote implicitly
    constexpr Dual(double v, double d) : value(v), deriv(d) {}

    constexpr Dual& operator+=(const Dual& o) {
        value += o.value;
        deriv += o.deriv;
        return *this;
    }
    constexpr Dual& operator-=(const Dual& o) {
        value -= o.value;
        deriv -= o.deriv;
        return *this;
    }
    constexpr Dual& operator*=(const Dual& o) {
        deriv = value * o.deriv + deriv * o.value;
        value *= o.value;
        return *this;
    }
    constexpr Dual& operator/=(const Dual& o) {
        deriv = (deriv * o.value - value * o.deriv) / (o.value * o.value);
        value /= o.value;
        return *this;
    }
};

constexpr Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }
constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
constexpr Dual operator/(Dual a, const Dual& b) { return a /= b; }

// Ordering looks at the value only; used for branch selection in tabulated potentials.
constexpr bool operator<(const Dual& a, const Dual& b) { return a.value < b.value; }
constexpr bool operator>(const Dual& a, const Dual& b) { return a.value > b.value; }
constexpr bool operator<=(const Dual& a, const Dual& b) { return a.value <= b.value; }
constexpr bool operator>=(const Dual& a, const Dual& b) { return a.value >= b.value; }

inline Dual exp(const Dual& a) {
    const double e = std::exp(a.value);
    return {e, e * a.deriv};
}
inline Dual log(const Dual& a) { return {std::log(a.value), a.deriv / a.value}; }
inline Dual sin(const Dual& a) { return {std::sin(a.value), std::cos(a.value) * a.deriv}; }
inline Dual cos(const Dual& a) { return {std::cos(a.value), -std::sin(a.value) * a.deriv}; }
inline Dual tanh(const Dual& a) {
    const double th = std::tanh(a.value);
    return {th, (1.0 - th * th) * a.deriv};
}
inline Dual sech(const Dual& a) {
    const double s = 1.0 / std::cosh(a.value);
    return {s, -s * std::tanh(a.value) * a.deriv};
}
inline Dual sqrt(const Dual& a) {
    const double r = std::sqrt(a.value);
    return {r, 0.5 * a.deriv / r};
}
/// Real exponent; requires a.value > 0 unless the exponent is integral.
inline Dual pow(const Dual& a, double p) {
    const double v = std::pow(a.value, p);
    return {v, p * std::pow(a.value, p - 1.0) * a.deriv};
}

/// Integer power by repeated squaring, exact in sign for negative bases.
constexpr Dual ipow(Dual base, int exponent) {
    if (exponent < 0) return Dual{1.0} / ipow(base, -exponent);
    Dual result{1.0};
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}
constexpr double ipow(double base, int exponent) {
    if (exponent < 0) return 1.0 / ipow(base, -exponent);
    double result = 1.0;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

/// Lagrangian L(t, q, qdot) written once over duals.
using LagrangianFn = std::function<Dual(const Dual& t, std::span<const Dual> q, std::span<const Dual> qdot)>;

/// Thrown when a Lagrangian (or anything derived from it) turns non-finite.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, double t, Vec q, Vec qdot)
        : std::runtime_error(what), t_(t), q_(std::move(q)), qdot_(std::move(qdot)) {}

    double t() const { return t_; }
    const Vec& q() const { return q_; }
    const Vec& qdot() const { return qdot_; }

private:
    double t_;
    Vec q_;
    Vec qdot_;
};

double lagrangian_value(const LagrangianFn& L, double t, std::span<const double> q, std::span<const double> qdot);

/// dL along the direction (dt, dq, dqdot); a single dual pass.
double directional_derivative(const LagrangianFn& L, double t, std::span<const double> q,
                              std::span<const double> qdot, double dt, std::span<const double> dq,
                              std::span<const double> dqdot);

Vec grad_q(const LagrangianFn& L, double t, std::span<const double> q, std::span<const double> qdot);
Vec grad_qdot(const LagrangianFn& L, double t, std::span<const double> q, std::span<const double> qdot);
double partial_t(const LagrangianFn& L, double t, std::span<const double> q, std::span<const double> qdot);

}  // namespace nlc
