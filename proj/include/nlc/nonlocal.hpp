#pragma once

#include <span>
#include <string>
#include <vector>

#include "nlc/system.hpp"
#include "nlc/trajectory.hpp"
#include "nlc/variation.hpp"

namespace nlc {

/// Generalized momentum dL/dqdot. Throws EvaluationError on a non-finite Lagrangian.
Vec momentum(const LagrangianSystem& sys, const State& s);

/// dL/dlambda at lambda = 0 for the given family (chain rule through the jet).
double integrand_m(const LagrangianSystem& sys, const VariationField& family, const State& s,
                   std::span<const double> qddot);

/// Sampled nonlocal constant C(t) = N(t) - I(t), N = p . delta q, I = integral of M from t0.
struct NonlocalConstantSeries {
    std::string name;
    double t0 = 0.0;
    std::vector<double> t;
    std::vector<double> boundary;  // N
    std::vector<double> integral;  // I
    std::vector<double> value;     // C
    IntegratorConfig config;
};

/// Evaluates the constant for `family` along `traj`. The family's channel must
/// have been registered at integration time (null families need none).
/// Throws std::out_of_range when t0 or a sample lies outside the span.
NonlocalConstantSeries nonlocal_constant(const Trajectory& traj, const VariationField& family, double t0,
                                         std::span<const double> sample_times);

/// Same, sampled at every accepted-step node.
NonlocalConstantSeries nonlocal_constant(const Trajectory& traj, const VariationField& family, double t0);

/// Integral of L over [t0, t1] from the action channel.
double action(const Trajectory& traj, double t0, double t1);

}  // namespace nlc
