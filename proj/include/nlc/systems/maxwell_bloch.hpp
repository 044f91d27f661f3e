#pragma once

#include <array>
#include <span>
#include <vector>

#include "nlc/integrate.hpp"
#include "nlc/series.hpp"
#include "nlc/system.hpp"
#include "nlc/trajectory.hpp"
#include "nlc/variation.hpp"

namespace nlc::systems {

/// Conservative Maxwell-Bloch (rotating wave) equations lifted to a Lagrangian
/// system in (q1, q2, q3) with q3 cyclic:
/// L = (qdot1^2 + qdot2^2 + qdot3^2 + qdot3 (q1^2 + q2^2)) / 2.
struct MaxwellBlochSystem {
    SystemPtr system;
};

MaxwellBlochSystem make_maxwell_bloch();

struct FirstIntegrals {
    double E = 0.0;
    double B = 0.0;
    double J = 0.0;
    double K = 0.0;  // 2 B E - J^2 / 2
};

FirstIntegrals mb_first_integrals(const State& s);

/// qddot3 = -(q1 qdot1 + q2 qdot2).
double mb_q3_accel(const State& s);
/// d/dt qddot3 expanded through the equations of motion.
double mb_q3_jerk(const State& s);

/// psi_{E,B}(u, v) = v^2/2 + 2 E u + B u^2 - u^3.
double mb_psi(double E, double B, double u, double v);

/// K in its cubic form psi_{E,B}(qdot3, qddot3), E and B taken at the state.
double mb_k_cubic_form(const State& s);
/// K written out as a polynomial in (q, qdot).
double mb_k_polynomial_form(const State& s);

/// Non-uniform scaling (q1, q2, q3) -> (e^l q1, e^l q2, e^(a l) q3).
VariationField mb_scaling_family(double a = -2.0);

/// Channel accumulating qdot3^2.
Quadrature mb_channel();
inline constexpr std::string_view kMbChannel = "mb_q3dot_sq";

/// (qdot1, qdot2, B) . (q1, q2, -2 q3) - 2 E t + 3 * integral of qdot3^2 from t0, at every node.
Series mb_rearranged_constant(const Trajectory& traj, double t0);

/// -dddot q3 - 2 B qdot3 - 2 E + 3 qdot3^2 with E, B fixed at the trajectory's initial state.
Series mb_third_order_residual(const Trajectory& traj, std::span<const double> samples);

/// Integral of du / (sqrt(2) sqrt(u^3 - B u^2 - 2 E u + K)) from u_from to u_to.
/// Simple roots at (or just beyond) an endpoint are removed by u = r +- s^2.
/// Throws std::domain_error when the cubic is not positive inside the interval
/// or an endpoint sits on a double root.
double mb_phi_quadrature(double u_from, double u_to, double E, double B, double K);

/// (x1, y1, x2, y2, z) with q3(t) = q30 -> state (q1, q2, q3; qdot1, qdot2, qdot3).
State mb_embed(const std::array<double, 5>& x, double q30 = 0.0, double t = 0.0);
std::array<double, 5> mb_project(const State& s);

}  // namespace nlc::systems
