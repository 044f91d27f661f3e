#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nlc/integrate.hpp"
#include "nlc/series.hpp"
#include "nlc/system.hpp"
#include "nlc/trajectory.hpp"

namespace nlc::systems {

/// Potential U(q) with a known lower bound.
class Potential {
public:
    using ValueFn = std::function<Dual(std::span<const Dual> q)>;

    Potential(std::string kind, ValueFn value, double infimum);

    /// U == 0.
    static Potential zero();
    /// U = (stiffness / 2) |q|^2.
    static Potential quadratic(double stiffness = 1.0);
    /// Separable U(q) = sum_i f(q_i), f a shape-preserving cubic through the
    /// table (zero end slopes) continued by quadratic walls of curvature `wall`.
    /// The infimum is dim * min(u).
    static Potential table(std::vector<double> x, std::vector<double> u, double wall = 1.0);

    const std::string& kind() const { return kind_; }
    /// Lower bound for a single coordinate; multiply by dim for separable tables.
    double infimum(std::size_t dim) const;

    Dual operator()(std::span<const Dual> q) const { return value_(q); }
    double value(std::span<const double> q) const;
    Vec gradient(std::span<const double> q) const;

private:
    std::string kind_;
    ValueFn value_;
    double infimum_;
    bool per_coordinate_ = false;
};

/// qddot = -k qdot - grad U(q), Lagrangian exp(k t) (|qdot|^2 / 2 - U(q)).
struct DissipativeSystem {
    std::size_t dim = 1;
    double k = 1.0;
    Potential potential = Potential::zero();
    SystemPtr system;

    double u_inf() const { return potential.infimum(dim); }
    /// |qdot|^2 / 2 + U(q).
    double energy(const State& s) const;
    /// exp(k t) * energy.
    double dissipative_energy(const State& s) const;
};

DissipativeSystem make_dissipative(std::size_t dim, double k, Potential potential);

/// Integrand exp((a+k)s) ((a-k)|qdot|^2 + 2(a+k) U) of the rearranged time-shift constant.
Quadrature dissipative_channel(const DissipativeSystem& sys, double a);
std::string dissipative_channel_name(double a);
/// |qdot|^2, used by the L2 estimate.
Quadrature speed_squared_channel();
inline constexpr std::string_view kSpeedSquaredChannel = "qdot_sq";

/// Speed channel plus one rearranged-constant channel per `a`.
std::vector<Quadrature> dissipative_channels(const DissipativeSystem& sys, std::span<const double> a_values);

/// exp((a+k)t)(|qdot|^2 + 2U) + integral from t to t0 of the channel integrand, at every node.
Series dissipative_rearranged_constant(const DissipativeSystem& sys, const Trajectory& traj, double a, double t0);

struct BoundCheck {
    bool present = false;
    bool holds = true;
    /// Largest (lhs - rhs) / max(1, |rhs|); nonpositive when the bound holds strictly.
    double worst_excess = -std::numeric_limits<double>::infinity();
    /// Largest |lhs - rhs| / max(1, |rhs|); zero when the bound is attained everywhere.
    double max_gap = 0.0;
    std::size_t samples = 0;
};

struct DissipativeEstimates {
    BoundCheck future_speed;     // |qdot|^2/2 <= |qdot0|^2/2 + U(q0) - U_inf, t >= t0
    BoundCheck energy_monotone;  // energy nonincreasing
    BoundCheck l2_speed;         // integral |qdot|^2 <= (energy0 - U_inf) / k, t >= t0
    BoundCheck past_energy;      // energy - U_inf <= exp(2k(t0-t)) (energy0 - U_inf), t <= t0
    BoundCheck past_speed;       // |qdot|^2 <= exp(2k(t0-t)) (|qdot0|^2 + 2U(q0) - 2U_inf), t <= t0

    bool all_hold() const;
};

/// Checks the future and past estimates at every node; violations beyond
/// `tolerance` (relative to max(1, |rhs|)) are reported, never thrown.
/// Needs the speed channel for the L2 estimate (otherwise that check is absent).
DissipativeEstimates dissipative_estimates(const DissipativeSystem& sys, const Trajectory& traj, double t0,
                                           double tolerance = 1e-9);

}  // namespace nlc::systems
