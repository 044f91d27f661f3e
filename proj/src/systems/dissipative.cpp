#include "nlc/systems/dissipative.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlc::systems {

namespace {

double speed_sq(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Shape-preserving piecewise cubic (Fritsch-Butland slopes, flat ends).
struct Pchip {
    std::vector<double> x, u, d;
    double wall;

    Pchip(std::vector<double> xs, std::vector<double> us, double w) : x(std::move(xs)), u(std::move(us)), wall(w) {
        if (x.size() != u.size() || x.size() < 2) throw std::invalid_argument("potential table needs >= 2 matching points");
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            if (!(x[i] < x[i + 1])) throw std::invalid_argument("potential table abscissae must increase strictly");
        if (!(wall >= 0.0)) throw std::invalid_argument("potential table wall curvature must be >= 0");
        const std::size_t m = x.size();
        d.assign(m, 0.0);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
            const double s0 = (u[i] - u[i - 1]) / h0, s1 = (u[i + 1] - u[i]) / h1;
            if (s0 * s1 <= 0.0) continue;
            const double w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
            d[i] = (w1 + w2) / (w1 / s0 + w2 / s1);
        }
    }

    Dual operator()(const Dual& q) const {
        if (q < x.front()) {
            const Dual z = q - x.front();
            return u.front() + 0.5 * wall * z * z;
        }
        if (q > x.back()) {
            const Dual z = q - x.back();
            return u.back() + 0.5 * wall * z * z;
        }
        auto it = std::upper_bound(x.begin(), x.end(), q.value);
        std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - x.begin()), x.size() - 1) - 1;
        const double h = x[i + 1] - x[i];
        const Dual s = (q - x[i]) / h;
        const Dual s2 = s * s, s3 = s2 * s;
        return (2.0 * s3 - 3.0 * s2 + 1.0) * u[i] + (s3 - 2.0 * s2 + s) * (h * d[i]) + (3.0 * s2 - 2.0 * s3) * u[i + 1] +
               (s3 - s2) * (h * d[i + 1]);
    }
};

std::string num(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

}  // namespace

Potential::Potential(std::string kind, ValueFn value, double infimum)
    : kind_(std::move(kind)), value_(std::move(value)), infimum_(infimum) {}

Potential Potential::zero() {
    return Potential("zero", [](std::span<const Dual>) { return Dual{0.0}; }, 0.0);
}

Potential Potential::quadratic(double stiffness) {
    if (!(stiffness >= 0.0)) throw std::invalid_argument("quadratic potential needs stiffness >= 0");
    return Potential(
        "quadratic",
        [stiffness](std::span<const Dual> q) {
            Dual s{0.0};
            for (const Dual& x : q) s += x * x;
            return 0.5 * stiffness * s;
        },
        0.0);
}

Potential Potential::table(std::vector<double> x, std::vector<double> u, double wall) {
    const double umin = u.empty() ? 0.0 : *std::min_element(u.begin(), u.end());
    Pchip f(std::move(x), std::move(u), wall);
    Potential p(
        "user-table",
        [f](std::span<const Dual> q) {
            Dual s{0.0};
            for (const Dual& x : q) s += f(x);
            return s;
        },
        umin);
    p.per_coordinate_ = true;
    return p;
}

double Potential::infimum(std::size_t dim) const { return per_coordinate_ ? infimum_ * static_cast<double>(dim) : infimum_; }

double Potential::value(std::span<const double> q) const {
    std::vector<Dual> d(q.begin(), q.end());
    return value_(d).value;
}

Vec Potential::gradient(std::span<const double> q) const {
    std::vector<Dual> d(q.begin(), q.end());
    Vec g(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        d[i].deriv = 1.0;
        g[i] = value_(d).deriv;
        d[i].deriv = 0.0;
    }
    return g;
}

double DissipativeSystem::energy(const State& s) const { return 0.5 * speed_sq(s.qdot) + potential.value(s.q); }

double DissipativeSystem::dissipative_energy(const State& s) const { return std::exp(k * s.t) * energy(s); }

DissipativeSystem make_dissipative(std::size_t dim, double k, Potential potential) {
    if (dim == 0) throw std::invalid_argument("dissipative system needs dim >= 1");
    if (!(k >= 0.0)) throw std::invalid_argument("damping k must be >= 0");
    DissipativeSystem out{dim, k, potential, nullptr};
    auto sys = std::make_shared<LagrangianSystem>();
    sys->name = "dissipative";
    sys->dim = dim;
    sys->lagrangian = [k, potential](const Dual& t, std::span<const Dual> q, std::span<const Dual> qdot) {
        Dual kin{0.0};
        for (const Dual& v : qdot) kin += v * v;
        return exp(k * t) * (0.5 * kin - potential(q));
    };
    sys->accel = [k, potential](double, std::span<const double> q, std::span<const double> qdot, std::span<double> out) {
        const Vec g = potential.gradient(q);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = -k * qdot[i] - g[i];
    };
    out.system = std::move(sys);
    return out;
}

std::string dissipative_channel_name(double a) { return "dissipative_shift(a=" + num(a) + ")"; }

Quadrature dissipative_channel(const DissipativeSystem& sys, double a) {
    const double k = sys.k;
    Potential U = sys.potential;
    return {dissipative_channel_name(a), [a, k, U](const State& s, std::span<const double>) {
                return std::exp((a + k) * s.t) * ((a - k) * speed_sq(s.qdot) + 2.0 * (a + k) * U.value(s.q));
            }};
}

Quadrature speed_squared_channel() {
    return {std::string(kSpeedSquaredChannel), [](const State& s, std::span<const double>) { return speed_sq(s.qdot); }};
}

std::vector<Quadrature> dissipative_channels(const DissipativeSystem& sys, std::span<const double> a_values) {
    std::vector<Quadrature> out{speed_squared_channel()};
    for (double a : a_values) out.push_back(dissipative_channel(sys, a));
    return out;
}

Series dissipative_rearranged_constant(const DissipativeSystem& sys, const Trajectory& traj, double a, double t0) {
    const std::size_t c = traj.channel_index(dissipative_channel_name(a));
    const double anchor = traj.channel_at(c, t0);
    Series out{"dissipative_shift_constant(a=" + num(a) + ")", t0, {}, {}, traj.config()};
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const State s = traj.node_state(i);
        const double local = std::exp((a + sys.k) * s.t) * (speed_sq(s.qdot) + 2.0 * sys.potential.value(s.q));
        out.t.push_back(s.t);
        out.value.push_back(local - (traj.channel(i, c) - anchor));
    }
    return out;
}

bool DissipativeEstimates::all_hold() const {
    for (const BoundCheck* b : {&future_speed, &energy_monotone, &l2_speed, &past_energy, &past_speed})
        if (b->present && !b->holds) return false;
    return true;
}

namespace {

void record(BoundCheck& b, double lhs, double rhs, double tolerance) {
    const double scale = std::max(1.0, std::abs(rhs));
    const double excess = (lhs - rhs) / scale;
    b.present = true;
    ++b.samples;
    b.worst_excess = std::max(b.worst_excess, excess);
    b.max_gap = std::max(b.max_gap, std::abs(excess));
    if (excess > tolerance) b.holds = false;
}

}  // namespace

DissipativeEstimates dissipative_estimates(const DissipativeSystem& sys, const Trajectory& traj, double t0,
                                           double tolerance) {
    DissipativeEstimates r;
    const State s0 = traj.state_at(t0);
    const double u_inf = sys.u_inf();
    const double e0 = sys.energy(s0);
    const double v0 = speed_sq(s0.qdot);
    const double u0 = sys.potential.value(s0.q);
    const bool have_l2 = traj.has_channel(kSpeedSquaredChannel) && sys.k > 0.0;
    const std::size_t l2c = have_l2 ? traj.channel_index(kSpeedSquaredChannel) : 0;
    const double l2_anchor = have_l2 ? traj.channel_at(l2c, t0) : 0.0;

    double prev_energy = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const State s = traj.node_state(i);
        const double e = sys.energy(s);
        const double v = speed_sq(s.qdot);
        if (i > 0) record(r.energy_monotone, e, prev_energy, tolerance);
        prev_energy = e;
        if (s.t >= t0) {
            record(r.future_speed, 0.5 * v, 0.5 * v0 + u0 - u_inf, tolerance);
            if (have_l2) record(r.l2_speed, traj.channel(i, l2c) - l2_anchor, (e0 - u_inf) / sys.k, tolerance);
        }
        if (s.t <= t0) {
            const double growth = std::exp(2.0 * sys.k * (t0 - s.t));
            record(r.past_energy, e - u_inf, growth * (e0 - u_inf), tolerance);
            record(r.past_speed, v, growth * (v0 + 2.0 * u0 - 2.0 * u_inf), tolerance);
        }
    }
    return r;
}

}  // namespace nlc::systems
