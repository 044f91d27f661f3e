#include "nlc/systems/lane_emden.hpp"

#include <algorithm>
#include <cmath>

namespace nlc::systems {

namespace {

constexpr std::string_view kFirstChannel = "lane_emden_first";
constexpr std::string_view kSecondChannel = "lane_emden_second";
constexpr std::string_view kThirdChannel = "lane_emden_third";

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

double LaneEmdenSystem::energy(const State& s) const {
    const double q = s.q[0], v = s.qdot[0];
    return 0.5 * v * v + ipow(q, n + 1) / (n + 1);
}

double LaneEmdenSystem::weighted_energy(const State& s) const {
    const double q = s.q[0], v = s.qdot[0], t = s.t;
    return ipow(t, 4) * (v * v + 2.0 * ipow(q, n + 1) / (n + 1));
}

LaneEmdenSystem make_lane_emden(int n) {
    if (n < 0) throw std::invalid_argument("Lane-Emden exponent must be a natural number");
    auto sys = std::make_shared<LagrangianSystem>();
    sys->name = "lane_emden";
    sys->dim = 1;
    sys->domain = TimeDomain{0.0, std::numeric_limits<double>::infinity()};
    sys->lagrangian = [n](const Dual& t, std::span<const Dual> q, std::span<const Dual> qdot) {
        return t * t * (0.5 * qdot[0] * qdot[0] - ipow(q[0], n + 1) / static_cast<double>(n + 1));
    };
    sys->accel = [n](double t, std::span<const double> q, std::span<const double> qdot, std::span<double> out) {
        out[0] = -ipow(q[0], n) - 2.0 * qdot[0] / t;
    };
    return LaneEmdenSystem{n, std::move(sys)};
}

VariationField lane_emden_family(const LaneEmdenSystem& sys, LaneEmdenConstant which) {
    switch (which) {
        case LaneEmdenConstant::first: return family_time_shift_power(1, -1.0, -2.0);
        case LaneEmdenConstant::second: return family_time_shift_power(1, 1.0, 2.0);
        case LaneEmdenConstant::third: return family_scaling({1.0}, 1.0);
        case LaneEmdenConstant::dyn_sym: return family_scaling({1.0}, 0.5 * (sys.n - 1));
    }
    throw std::invalid_argument("unknown Lane-Emden constant");
}

std::vector<Quadrature> lane_emden_channels(const LaneEmdenSystem& sys) {
    const int n = sys.n;
    return {
        {std::string(kFirstChannel),
         [](const State& s, std::span<const double>) { return 2.0 * s.qdot[0] * s.qdot[0] / s.t; }},
        {std::string(kSecondChannel),
         [n](const State& s, std::span<const double>) { return ipow(s.t, 3) * ipow(s.q[0], n + 1); }},
        {std::string(kThirdChannel),
         [n](const State& s, std::span<const double>) { return s.t * s.t * ipow(s.q[0], n + 1); }},
    };
}

Series lane_emden_constant(const LaneEmdenSystem& sys, const Trajectory& traj, LaneEmdenConstant which, double t0) {
    const int n = sys.n;
    const double np1 = n + 1;
    std::string_view channel;
    std::string name;
    switch (which) {
        case LaneEmdenConstant::first: channel = kFirstChannel, name = "lane_emden_first"; break;
        case LaneEmdenConstant::second: channel = kSecondChannel, name = "lane_emden_second"; break;
        case LaneEmdenConstant::third: channel = kThirdChannel, name = "lane_emden_third"; break;
        case LaneEmdenConstant::dyn_sym: channel = kThirdChannel, name = "lane_emden_dyn_sym"; break;
    }
    const std::size_t c = traj.channel_index(channel);
    const double anchor = traj.channel_at(c, t0);
    Series out{name, t0, {}, {}, traj.config()};
    out.t.reserve(traj.size());
    out.value.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const State s = traj.node_state(i);
        const double t = s.t, q = s.q[0], v = s.qdot[0];
        const double integral = traj.channel(i, c) - anchor;
        double value = 0.0;
        switch (which) {
            case LaneEmdenConstant::first: value = sys.energy(s) + integral; break;
            case LaneEmdenConstant::second: value = sys.weighted_energy(s) - 8.0 / np1 * integral; break;
            case LaneEmdenConstant::third:
            case LaneEmdenConstant::dyn_sym:
                value = t * t * (2.0 / np1 * t * ipow(q, n + 1) + q * v + t * v * v) + (n - 5) / np1 * integral;
                if (which == LaneEmdenConstant::dyn_sym) value *= 0.5 * (n - 1);
                break;
        }
        out.t.push_back(t);
        out.value.push_back(value);
    }
    return out;
}

AsymptoticFit lane_emden_asymptotics(const LaneEmdenSystem& sys, const Trajectory& traj, double t_lo, double t_hi) {
    const int n = sys.n;
    if (n % 2 == 0 || n < 5) throw UnsupportedCase("asymptotic estimates need odd n >= 5 (got n = " + std::to_string(n) + ")");
    if (t_lo < 10.0) throw std::invalid_argument("asymptotic window must start at t >= 10");
    if (!(t_hi > t_lo)) throw std::invalid_argument("asymptotic window is empty");
    if (!traj.contains(t_lo) || !traj.contains(t_hi)) throw std::out_of_range("asymptotic window outside trajectory span");

    // Nodes inside the window plus a log-spaced dense grid.
    std::vector<double> times;
    for (double t : traj.times())
        if (t >= t_lo && t <= t_hi) times.push_back(t);
    constexpr int kDense = 4000;
    const double lr = std::log(t_hi / t_lo);
    for (int i = 0; i <= kDense; ++i) times.push_back(std::min(t_hi, t_lo * std::exp(lr * i / kDense)));
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    AsymptoticFit fit;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.samples = times.size();
    const double np1 = n + 1;

    constexpr int kBins = 24;
    std::vector<double> q_max(kBins, 0.0), q_at(kBins, 0.0), v_max(kBins, 0.0), v_at(kBins, 0.0);
    std::vector<State> states;
    states.reserve(times.size());
    for (double t : times) {
        const State s = traj.state_at(t);
        const double q = s.q[0], v = s.qdot[0];
        fit.c1 = std::max(fit.c1, t * t * (2.0 / np1 * t * ipow(q, n + 1) + q * v + t * v * v));
        fit.c3 = std::max(fit.c3, std::abs(q) * std::pow(t, 1.0 / np1));
        fit.c4 = std::max(fit.c4, std::abs(v) * std::sqrt(t));
        const int bin = std::min(kBins - 1, static_cast<int>(std::log(t / t_lo) / lr * kBins));
        if (std::abs(q) >= q_max[bin]) q_max[bin] = std::abs(q), q_at[bin] = t;
        if (std::abs(v) >= v_max[bin]) v_max[bin] = std::abs(v), v_at[bin] = t;
        states.push_back(s);
    }
    for (const State& s : states) fit.c2 = std::max(fit.c2, fit.c1 / (s.t * s.t) + 0.5 * s.q[0] * s.q[0]);

    std::vector<double> lx, ly, vx, vy;
    bool ok = true;
    for (int b = 0; b < kBins; ++b) {
        if (!(q_max[b] > 0.0) || !(v_max[b] > 0.0)) {
            ok = false;
            break;
        }
        lx.push_back(std::log(q_at[b]));
        ly.push_back(std::log(q_max[b]));
        vx.push_back(std::log(v_at[b]));
        vy.push_back(std::log(v_max[b]));
    }
    fit.slopes_defined = ok;
    if (ok) {
        fit.q_slope = slope_fit(lx, ly);
        fit.qdot_slope = slope_fit(vx, vy);
    } else {
        fit.q_slope = fit.qdot_slope = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

}  // namespace nlc::systems
