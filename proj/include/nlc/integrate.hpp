#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlc/system.hpp"
#include "nlc/trajectory.hpp"
#include "nlc/variation.hpp"

namespace nlc {

/// A scalar integrand accumulated alongside the state as an extra RK channel.
struct Quadrature {
    std::string name;
    std::function<double(const State& s, std::span<const double> qddot)> integrand;
};

/// Name of the always-present action channel (integral of L).
inline constexpr std::string_view kActionChannel = "L";

std::string family_channel_name(const VariationField& family);
Quadrature action_channel(const SystemPtr& system);
/// Integrand M = dL/dq . delta q + dL/dqdot . delta qdot of the given family.
Quadrature family_channel(const SystemPtr& system, const VariationField& family);

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, State last_good)
        : std::runtime_error(what), last_good_(std::move(last_good)) {}
    const State& last_good() const { return last_good_; }

private:
    State last_good_;
};

/// Adaptive Dormand-Prince 5(4) integration of qddot = accel from `init` to `t_end`
/// (either direction). Channel 0 is always the action; then one channel per
/// family, then `extra`. Channels share the RK stages but stay out of the
/// step-size error norm, so the step sequence depends only on the motion.
///
/// Throws std::invalid_argument for an initial state outside the time domain
/// and IntegrationError when non-finite values persist down to the minimum step.
Trajectory integrate(const SystemPtr& system, const State& init, double t_end, const IntegratorConfig& config = {},
                     std::span<const VariationField> families = {}, std::vector<Quadrature> extra = {});

/// Taylor start for Lane-Emden with q(0) = q0, qdot(0) = 0, evaluated at t = epsilon.
State lane_emden_series_start(int n, double q0, double epsilon = 1e-4);

}  // namespace nlc
