#include "nlc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlc::verify {

namespace {

DriftReport drift_of(const std::string& name, double t0, std::span<const double> t, std::span<const double> v,
                     const IntegratorConfig& config) {
    if (t.size() < 2 || t.size() != v.size()) throw std::invalid_argument("drift needs at least two samples");
    std::size_t anchor_idx = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] == t0) {
            anchor_idx = i;
            break;
        }
    DriftReport r;
    r.name = name;
    r.anchor = v[anchor_idx];
    r.time_of_max = t[anchor_idx];
    r.config = config;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = std::abs(v[i] - r.anchor);
        if (d > r.max_abs_drift) {
            r.max_abs_drift = d;
            r.time_of_max = t[i];
        }
    }
    r.max_rel_drift = r.max_abs_drift / std::max(std::abs(r.anchor), 1.0);
    return r;
}

}  // namespace

DriftReport drift(const Series& s) { return drift_of(s.name, s.t0, s.t, s.value, s.config); }

DriftReport drift(const NonlocalConstantSeries& s) { return drift_of(s.name, s.t0, s.t, s.value, s.config); }

MonotoneReport check_monotone(std::span<const double> values, Direction dir, double tolerance) {
    MonotoneReport r;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double step = values[i] - values[i - 1];
        const double against = dir == Direction::nondecreasing ? -step : step;
        if (against > r.max_violation) r.max_violation = against;
        if (against > tolerance) {
            if (r.violations == 0) r.first_violation = i;
            ++r.violations;
            r.holds = false;
        }
    }
    return r;
}

MonotoneReport check_monotone(const Series& s, Direction dir, double tolerance) {
    return check_monotone(s.value, dir, tolerance);
}

MonotoneReport check_sign(std::span<const double> values, Sign sign, double tolerance) {
    MonotoneReport r;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double against = sign == Sign::nonnegative ? -values[i] : values[i];
        if (against > r.max_violation) r.max_violation = against;
        if (against > tolerance) {
            if (r.violations == 0) r.first_violation = i;
            ++r.violations;
            r.holds = false;
        }
    }
    return r;
}

MonotoneReport check_channel_sign(const Trajectory& traj, std::string_view channel, Sign sign, double tolerance) {
    const std::size_t c = traj.channel_index(channel);
    std::vector<double> rates(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) rates[i] = traj.channel_rate(i, c);
    return check_sign(rates, sign, tolerance);
}

ConvergenceTable convergence_study(std::string name, const DriftScenario& scenario, std::span<const double> rtols,
                                   IntegratorConfig base) {
    ConvergenceTable table;
    table.name = std::move(name);
    for (double rtol : rtols) {
        IntegratorConfig cfg = base;
        cfg.rtol = rtol;
        cfg.atol = rtol * 1e-3;
        const DriftReport d = scenario(cfg);
        table.rows.push_back({rtol, d.max_abs_drift, d.max_rel_drift});
    }
    std::vector<double> x, y;
    for (const auto& row : table.rows) {
        if (row.max_rel_drift > kRoundoffDrift) {
            x.push_back(std::log(row.rtol));
            y.push_back(std::log(row.max_rel_drift));
        }
    }
    // A rate needs every point above round-off; a partial set would fit noise.
    if (x.size() >= 2 && x.size() == table.rows.size()) {
        const double m = static_cast<double>(x.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sx += x[i];
            sy += y[i];
            sxx += x[i] * x[i];
            sxy += x[i] * y[i];
        }
        const double den = m * sxx - sx * sx;
        if (den != 0.0) table.slope = (m * sxy - sx * sy) / den;
    }
    return table;
}

}  // namespace nlc::verify
