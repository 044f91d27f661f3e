#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nlc/integrate.hpp"
#include "nlc/series.hpp"
#include "nlc/system.hpp"
#include "nlc/trajectory.hpp"
#include "nlc/variation.hpp"

namespace nlc::systems {

/// Raised when an operation is asked for outside its proven hypotheses.
class UnsupportedCase : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// qddot = -q^n - 2 qdot / t on t > 0, Lagrangian t^2 (qdot^2/2 - q^(n+1)/(n+1)).
struct LaneEmdenSystem {
    int n = 5;
    SystemPtr system;

    /// qdot^2/2 + q^(n+1)/(n+1).
    double energy(const State& s) const;
    /// t^4 (qdot^2 + 2 q^(n+1)/(n+1)).
    double weighted_energy(const State& s) const;
};

LaneEmdenSystem make_lane_emden(int n);

enum class LaneEmdenConstant { first, second, third, dyn_sym };

/// The perturbation family behind each constant:
/// first  q(t - lambda/t^2), second q(t + lambda t^2),
/// third  e^lambda q(e^lambda t), dyn_sym e^lambda q(e^(lambda(n-1)/2) t).
VariationField lane_emden_family(const LaneEmdenSystem& sys, LaneEmdenConstant which);

/// Integrand channels: 2 qdot^2 / s, s^3 q^(n+1), s^2 q^(n+1).
std::vector<Quadrature> lane_emden_channels(const LaneEmdenSystem& sys);

/// Rearranged constant at every node; needs lane_emden_channels registered.
Series lane_emden_constant(const LaneEmdenSystem& sys, const Trajectory& traj, LaneEmdenConstant which, double t0);

struct AsymptoticFit {
    double t_lo = 0.0, t_hi = 0.0;
    double c1 = 0.0;  // max over window of t^2 (2/(n+1) t q^(n+1) + q qdot + t qdot^2)
    double c2 = 0.0;  // max over window of c1/t^2 + q^2/2
    double c3 = 0.0;  // smallest c with |q| <= c t^(-1/(n+1))
    double c4 = 0.0;  // smallest c with |qdot| <= c t^(-1/2)
    double q_slope = 0.0;      // log-log slope of the |q| envelope
    double qdot_slope = 0.0;   // log-log slope of the |qdot| envelope
    bool slopes_defined = false;
    std::size_t samples = 0;
};

/// Fits the large-t bounds over [t_lo, t_hi]. Requires odd n >= 5 and t_lo >= 10,
/// otherwise throws UnsupportedCase / std::invalid_argument.
AsymptoticFit lane_emden_asymptotics(const LaneEmdenSystem& sys, const Trajectory& traj, double t_lo, double t_hi);

}  // namespace nlc::systems
