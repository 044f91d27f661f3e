#include "nlc/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nlc/nonlocal.hpp"

namespace nlc {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI step control.
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;

constexpr double kDomainMargin = 1e-8;

/// Packs [q, qdot, channels] and evaluates its derivative.
class Rhs {
public:
    Rhs(const LagrangianSystem& sys, const std::vector<Quadrature>& channels)
        : sys_(sys), channels_(channels), n_(sys.dim), s_{0.0, Vec(n_), Vec(n_)} {}

    std::size_t size() const { return 2 * n_ + channels_.size(); }

    // Returns false if anything came out non-finite.
    bool operator()(double t, std::span<const double> y, std::span<double> dy) {
        s_.t = t;
        std::copy_n(y.begin(), n_, s_.q.begin());
        std::copy_n(y.begin() + n_, n_, s_.qdot.begin());
        std::copy_n(y.begin() + n_, n_, dy.begin());
        std::span<double> qdd = dy.subspan(n_, n_);
        try {
            sys_.accel(t, s_.q, s_.qdot, qdd);
            for (std::size_t c = 0; c < channels_.size(); ++c) dy[2 * n_ + c] = channels_[c].integrand(s_, qdd);
        } catch (const EvaluationError&) {
            return false;
        }
        return std::all_of(dy.begin(), dy.end(), [](double v) { return std::isfinite(v); });
    }

private:
    const LagrangianSystem& sys_;
    const std::vector<Quadrature>& channels_;
    std::size_t n_;
    State s_;
};

State unpack(double t, std::span<const double> y, std::size_t n) {
    return State{t, Vec(y.begin(), y.begin() + n), Vec(y.begin() + n, y.begin() + 2 * n)};
}

}  // namespace

std::string family_channel_name(const VariationField& family) { return "M:" + family.label(); }

Quadrature action_channel(const SystemPtr& system) {
    return {std::string(kActionChannel),
            [system](const State& s, std::span<const double>) { return system->lagrangian_at(s); }};
}

Quadrature family_channel(const SystemPtr& system, const VariationField& family) {
    return {family_channel_name(family), [system, family](const State& s, std::span<const double> qdd) {
                return integrand_m(*system, family, s, qdd);
            }};
}

Trajectory integrate(const SystemPtr& system, const State& init, double t_end, const IntegratorConfig& config,
                     std::span<const VariationField> families, std::vector<Quadrature> extra) {
    config.validate();
    const LagrangianSystem& sys = *system;
    const std::size_t n = sys.dim;
    if (init.q.size() != n || init.qdot.size() != n) throw std::invalid_argument("initial state has wrong dimension");
    if (!sys.domain.contains(init.t)) throw std::invalid_argument("initial time outside the system's time domain");
    if (!std::isfinite(t_end)) throw std::invalid_argument("t_end must be finite");

    std::vector<Quadrature> channels;
    channels.push_back(action_channel(system));
    for (const auto& f : families) {
        if (f.dim() != n) throw std::invalid_argument("family dimension does not match system");
        channels.push_back(family_channel(system, f));
    }
    for (auto& q : extra) channels.push_back(std::move(q));

    std::vector<std::string> names;
    for (const auto& c : channels) names.push_back(c.name);
    Trajectory traj(system, names, config);

    // Stop short of an open domain end.
    const double margin = std::max(config.h_min, kDomainMargin);
    double target = t_end;
    bool clipped = false;
    if (std::isfinite(sys.domain.lo) && target < sys.domain.lo + margin) {
        target = sys.domain.lo + margin;
        clipped = true;
    }
    if (std::isfinite(sys.domain.hi) && target > sys.domain.hi - margin) {
        target = sys.domain.hi - margin;
        clipped = true;
    }
    const Termination at_target = clipped ? Termination::approached_domain_boundary : Termination::reached_t_end;

    Rhs rhs(sys, channels);
    const std::size_t dim_y = rhs.size();
    const std::size_t dim_err = 2 * n;
    const std::size_t m = channels.size();

    Vec y(dim_y, 0.0);
    std::copy(init.q.begin(), init.q.end(), y.begin());
    std::copy(init.qdot.begin(), init.qdot.end(), y.begin() + n);
    std::array<Vec, 7> k;
    for (auto& ki : k) ki.assign(dim_y, 0.0);
    Vec ytmp(dim_y), ynew(dim_y);

    double t = init.t;
    if (!rhs(t, y, k[0])) throw IntegrationError("non-finite derivative at the initial state", init);

    auto push = [&](double tn, std::span<const double> yn, std::span<const double> dyn) {
        traj.push_node(tn, yn.subspan(0, n), yn.subspan(n, n), dyn.subspan(n, n), yn.subspan(2 * n, m),
                       dyn.subspan(2 * n, m));
    };
    push(t, y, k[0]);

    const double span = target - t;
    if (span == 0.0) {
        traj.finish(init.t, at_target, 0, 0);
        return traj;
    }
    const double dir = span > 0 ? 1.0 : -1.0;

    auto err_norm = [&](std::span<const double> a, std::span<const double> b, std::span<const double> e) {
        double sum = 0.0;
        for (std::size_t i = 0; i < dim_err; ++i) {
            const double sk = config.atol + config.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
            sum += (e[i] / sk) * (e[i] / sk);
        }
        return std::sqrt(sum / static_cast<double>(dim_err));
    };

    // Starting step.
    double h = config.h_init;
    if (h == 0.0) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < dim_err; ++i) {
            const double sk = config.atol + config.rtol * std::abs(y[i]);
            d0 += (y[i] / sk) * (y[i] / sk);
            d1 += (k[0][i] / sk) * (k[0][i] / sk);
        }
        d0 = std::sqrt(d0 / dim_err);
        d1 = std::sqrt(d1 / dim_err);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min({h0, config.h_max, std::abs(span)});
        for (std::size_t i = 0; i < dim_y; ++i) ytmp[i] = y[i] + dir * h0 * k[0][i];
        double h1 = std::max(1e-6, h0 * 1e-3);
        if (rhs(t + dir * h0, ytmp, k[1])) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < dim_err; ++i) {
                const double sk = config.atol + config.rtol * std::abs(y[i]);
                const double diff = (k[1][i] - k[0][i]) / sk;
                d2 += diff * diff;
            }
            d2 = std::sqrt(d2 / dim_err) / h0;
            const double der12 = std::max(d1, d2);
            if (der12 > 1e-15) h1 = std::pow(0.01 / der12, 0.2);
        }
        h = std::min({100 * h0, h1});
    }
    h = std::clamp(h, std::max(config.h_min, 1e-300), config.h_max);

    std::size_t accepted = 0, rejected = 0;
    double err_old = 1e-4;
    bool last_rejected = false;

    auto finish = [&](Termination why) {
        traj.finish(init.t, why, accepted, rejected);
        return std::move(traj);
    };

    while (true) {
        if (accepted + rejected >= config.max_steps) return finish(Termination::max_steps);

        const double h_floor = std::max(config.h_min, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t));
        h = std::min(h, config.h_max);
        bool last = false;
        double step = dir * h;
        if (dir * (t + step - target) >= 0.0 || std::abs(target - t - step) < h_floor) {
            step = target - t;
            last = true;
        }

        const auto stage = [&](std::size_t idx, double ct, std::initializer_list<std::pair<std::size_t, double>> terms) {
            for (std::size_t i = 0; i < dim_y; ++i) {
                double acc = y[i];
                for (const auto& [j, a] : terms) acc += step * a * k[j][i];
                ytmp[i] = acc;
            }
            return rhs(t + ct * step, ytmp, k[idx]);
        };
        bool ok = stage(1, c2, {{0, a21}}) && stage(2, c3, {{0, a31}, {1, a32}}) &&
                  stage(3, c4, {{0, a41}, {1, a42}, {2, a43}}) && stage(4, c5, {{0, a51}, {1, a52}, {2, a53}, {3, a54}}) &&
                  stage(5, 1.0, {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
        if (ok) {
            for (std::size_t i = 0; i < dim_y; ++i)
                ynew[i] = y[i] + step * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
            const double t_new = last ? target : t + step;
            ok = rhs(t_new, ynew, k[6]);
        }

        double err = std::numeric_limits<double>::infinity();
        if (ok) {
            for (std::size_t i = 0; i < dim_err; ++i)
                ytmp[i] = step * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                                  e7 * k[6][i]);
            err = err_norm(y, ynew, ytmp);
        }

        if (ok && err <= 1.0) {
            t = last ? target : t + step;
            y.swap(ynew);
            std::swap(k[0], k[6]);
            ++accepted;
            push(t, y, k[0]);

            double fac = err == 0.0 ? kFacMax : kSafety * std::pow(err, -kAlpha) * std::pow(err_old, kBeta);
            fac = std::clamp(fac, kFacMin, last_rejected ? 1.0 : kFacMax);
            err_old = std::max(err, 1e-4);
            last_rejected = false;
            h = std::abs(step) * fac;

            double norm = 0.0;
            for (std::size_t i = 0; i < dim_err; ++i) norm = std::max(norm, std::abs(y[i]));
            if (norm > config.blowup_norm) return finish(Termination::blow_up);
            if (last) return finish(at_target);
        } else {
            ++rejected;
            last_rejected = true;
            const double fac = ok ? std::clamp(kSafety * std::pow(err, -0.2), kFacMin, 1.0) : kFacMin;
            h = std::abs(step) * fac;
            if (h < h_floor) {
                if (!ok) throw IntegrationError("non-finite values persisted down to the minimum step", unpack(t, y, n));
                return finish(Termination::step_underflow);
            }
        }
    }
}

State lane_emden_series_start(int n, double q0, double epsilon) {
    if (!(q0 > 0.0)) throw std::invalid_argument("Lane-Emden series start needs q0 > 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("Lane-Emden series start needs epsilon > 0");
    const double e = epsilon;
    const double qn = ipow(q0, n);
    const double q2n1 = ipow(q0, 2 * n - 1);
    const double q = q0 - qn * e * e / 6.0 + n * q2n1 * ipow(e, 4) / 120.0;
    const double qdot = -qn * e / 3.0 + n * q2n1 * ipow(e, 3) / 30.0;
    return State{e, {q}, {qdot}};
}

}  // namespace nlc
