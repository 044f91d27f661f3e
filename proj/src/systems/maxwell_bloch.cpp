#include "nlc/systems/maxwell_bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlc/nonlocal.hpp"

namespace nlc::systems {

MaxwellBlochSystem make_maxwell_bloch() {
    auto sys = std::make_shared<LagrangianSystem>();
    sys->name = "maxwell_bloch";
    sys->dim = 3;
    sys->lagrangian = [](const Dual&, std::span<const Dual> q, std::span<const Dual> v) {
        return 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[2] * (q[0] * q[0] + q[1] * q[1]));
    };
    sys->accel = [](double, std::span<const double> q, std::span<const double> v, std::span<double> out) {
        out[0] = q[0] * v[2];
        out[1] = q[1] * v[2];
        out[2] = -(q[0] * v[0] + q[1] * v[1]);
    };
    return MaxwellBlochSystem{std::move(sys)};
}

FirstIntegrals mb_first_integrals(const State& s) {
    const auto& q = s.q;
    const auto& v = s.qdot;
    FirstIntegrals f;
    f.E = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    f.B = v[2] + 0.5 * (q[0] * q[0] + q[1] * q[1]);
    f.J = q[0] * v[1] - q[1] * v[0];
    f.K = 2.0 * f.B * f.E - 0.5 * f.J * f.J;
    return f;
}

double mb_q3_accel(const State& s) { return -(s.q[0] * s.qdot[0] + s.q[1] * s.qdot[1]); }

double mb_q3_jerk(const State& s) {
    const auto& q = s.q;
    const auto& v = s.qdot;
    return -(v[0] * v[0] + v[1] * v[1] + (q[0] * q[0] + q[1] * q[1]) * v[2]);
}

double mb_psi(double E, double B, double u, double v) { return 0.5 * v * v + 2.0 * E * u + B * u * u - u * u * u; }

double mb_k_cubic_form(const State& s) {
    const FirstIntegrals f = mb_first_integrals(s);
    return mb_psi(f.E, f.B, s.qdot[2], mb_q3_accel(s));
}

double mb_k_polynomial_form(const State& s) {
    const auto& q = s.q;
    const auto& v = s.qdot;
    const double r = q[0] * v[0] + q[1] * v[1];
    return 0.5 * r * r + (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) * v[2] + 0.5 * (q[0] * q[0] + q[1] * q[1]) * v[2] * v[2];
}

VariationField mb_scaling_family(double a) { return family_scaling({1.0, 1.0, a}, 0.0); }

Quadrature mb_channel() {
    return {std::string(kMbChannel), [](const State& s, std::span<const double>) { return s.qdot[2] * s.qdot[2]; }};
}

Series mb_rearranged_constant(const Trajectory& traj, double t0) {
    const std::size_t c = traj.channel_index(kMbChannel);
    const double anchor = traj.channel_at(c, t0);
    Series out{"mb_scaling_constant", t0, {}, {}, traj.config()};
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const State s = traj.node_state(i);
        const FirstIntegrals f = mb_first_integrals(s);
        const double local = s.qdot[0] * s.q[0] + s.qdot[1] * s.q[1] - 2.0 * f.B * s.q[2] - 2.0 * f.E * s.t;
        out.t.push_back(s.t);
        out.value.push_back(local + 3.0 * (traj.channel(i, c) - anchor));
    }
    return out;
}

Series mb_third_order_residual(const Trajectory& traj, std::span<const double> samples) {
    const FirstIntegrals f0 = mb_first_integrals(traj.state_at(traj.t_initial()));
    Series out{"mb_third_order_residual", traj.t_initial(), {}, {}, traj.config()};
    for (double t : samples) {
        const State s = traj.state_at(t);
        const double u = s.qdot[2];
        out.t.push_back(t);
        out.value.push_back(-mb_q3_jerk(s) - 2.0 * f0.B * u - 2.0 * f0.E + 3.0 * u * u);
    }
    return out;
}

namespace {

struct Cubic {
    // u^3 + a u^2 + b u + c
    double a, b, c;

    double operator()(double u) const { return ((u + a) * u + b) * u + c; }
    double deriv(double u) const { return (3.0 * u + 2.0 * a) * u + b; }
    double scale(double u) const { return 1.0 + std::abs(u * u * u) + std::abs(a * u * u) + std::abs(b * u) + std::abs(c); }

    std::vector<double> real_roots() const {
        const double p = b - a * a / 3.0;
        const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        const double shift = -a / 3.0;
        std::vector<double> roots;
        const double disc = q * q / 4.0 + p * p * p / 27.0;
        if (p == 0.0 && q == 0.0) {
            roots = {shift};
        } else if (disc > 0.0) {
            const double sd = std::sqrt(disc);
            roots = {std::cbrt(-q / 2.0 + sd) + std::cbrt(-q / 2.0 - sd) + shift};
        } else {
            const double r = 2.0 * std::sqrt(-p / 3.0);
            const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
            const double phi = std::acos(arg);
            for (int k = 0; k < 3; ++k) roots.push_back(r * std::cos(phi / 3.0 - 2.0 * std::numbers::pi * k / 3.0) + shift);
        }
        for (double& x : roots) {
            for (int it = 0; it < 4; ++it) {
                const double d = deriv(x);
                if (d == 0.0) break;
                const double nx = x - (*this)(x) / d;
                if (!std::isfinite(nx)) break;
                x = nx;
            }
        }
        std::sort(roots.begin(), roots.end());
        return roots;
    }

    /// (u^3 + a u^2 + b u + c) / (u - r) for a root r.
    double deflated(double r, double u) const { return u * u + (a + r) * u + (b + r * (a + r)); }
};

double integrate_smooth(auto f, double lo, double hi) {
    if (lo == hi) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-14);
}

}  // namespace

double mb_phi_quadrature(double u_from, double u_to, double E, double B, double K) {
    if (u_from == u_to) return 0.0;
    const double lo = std::min(u_from, u_to);
    const double hi = std::max(u_from, u_to);
    const double sign = u_to > u_from ? 1.0 : -1.0;
    const Cubic P{-B, -2.0 * E, K};
    const double len = hi - lo;

    const std::vector<double> roots = P.real_roots();
    auto root_tol = [&](double r) { return 1e-10 * (1.0 + std::abs(r)); };
    auto simple = [&](double r) { return std::abs(P.deriv(r)) > 1e-7 * P.scale(r) / (1.0 + std::abs(r)); };

    std::optional<double> lo_root, hi_root;
    for (double r : roots) {
        const double tol = root_tol(r);
        if (r > lo + tol && r < hi - tol) throw std::domain_error("phi: cubic vanishes inside the integration interval");
        const bool at_lo = std::abs(r - lo) <= tol, at_hi = std::abs(r - hi) <= tol;
        if ((at_lo || at_hi) && !simple(r)) throw std::domain_error("phi: endpoint sits on a double root");
        if (r <= lo + tol && lo - r <= len && simple(r) && (!lo_root || r > *lo_root)) lo_root = r;
        if (r >= hi - tol && r - hi <= len && simple(r) && (!hi_root || r < *hi_root)) hi_root = r;
    }
    const double mid = 0.5 * (lo + hi);
    if (!(P(mid) > 0.0)) throw std::domain_error("phi: cubic is not positive on the integration interval");

    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    auto plain = [&](double u) {
        const double p = P(u);
        if (!(p > 0.0)) throw std::domain_error("phi: cubic is not positive on the integration interval");
        return inv_sqrt2 / std::sqrt(p);
    };

    double left = 0.0;
    if (lo_root) {
        // u = r + s^2, du / sqrt(2 (u - r) Q(u)) = sqrt(2) ds / sqrt(Q)
        const double r = *lo_root;
        left = integrate_smooth(
            [&](double s) {
                const double qv = P.deflated(r, r + s * s);
                if (!(qv > 0.0)) throw std::domain_error("phi: cubic is not positive on the integration interval");
                return std::numbers::sqrt2 / std::sqrt(qv);
            },
            std::sqrt(std::max(0.0, lo - r)), std::sqrt(mid - r));
    } else {
        left = integrate_smooth(plain, lo, mid);
    }

    double right = 0.0;
    if (hi_root) {
        // u = r - s^2 with Q(u) < 0 below the root
        const double r = *hi_root;
        right = integrate_smooth(
            [&](double s) {
                const double qv = -P.deflated(r, r - s * s);
                if (!(qv > 0.0)) throw std::domain_error("phi: cubic is not positive on the integration interval");
                return std::numbers::sqrt2 / std::sqrt(qv);
            },
            std::sqrt(std::max(0.0, r - hi)), std::sqrt(r - mid));
    } else {
        right = integrate_smooth(plain, mid, hi);
    }
    return sign * (left + right);
}

State mb_embed(const std::array<double, 5>& x, double q30, double t) {
    return State{t, {x[0], x[2], q30}, {x[1], x[3], x[4]}};
}

std::array<double, 5> mb_project(const State& s) { return {s.q[0], s.qdot[0], s.q[1], s.qdot[1], s.qdot[2]}; }

}  // namespace nlc::systems
