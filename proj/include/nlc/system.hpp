#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>

#include "nlc/autodiff.hpp"

namespace nlc {

/// Open time interval (lo, hi); the whole real line by default.
struct TimeDomain {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double t) const { return t > lo && t < hi; }
};

struct State {
    double t = 0.0;
    Vec q;
    Vec qdot;
};

/// Euler-Lagrange right-hand side qddot = accel(t, q, qdot), written into `out`.
using AccelFn =
    std::function<void(double t, std::span<const double> q, std::span<const double> qdot, std::span<double> out)>;

struct LagrangianSystem {
    std::string name;
    std::size_t dim = 0;
    LagrangianFn lagrangian;
    AccelFn accel;
    TimeDomain domain;

    Vec acceleration(const State& s) const;
    double lagrangian_at(const State& s) const;
};

using SystemPtr = std::shared_ptr<const LagrangianSystem>;

/// Residual d/dt(dL/dqdot) - dL/dq with qddot taken from `accel`.
/// The outer time derivative is a central difference of size `h` along the
/// flow direction (1, qdot, qddot); the inner gradients come from duals.
Vec euler_lagrange_residual(const LagrangianSystem& sys, const State& s, double h = 1e-5);

}  // namespace nlc
