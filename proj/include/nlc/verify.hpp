#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlc/nonlocal.hpp"
#include "nlc/series.hpp"
#include "nlc/trajectory.hpp"

namespace nlc::verify {

struct DriftReport {
    std::string name;
    double anchor = 0.0;          // value at t0 (or the first sample)
    double max_abs_drift = 0.0;
    double max_rel_drift = 0.0;   // max_abs_drift / max(|anchor|, 1)
    double time_of_max = 0.0;
    IntegratorConfig config;
};

/// Needs at least two samples. The anchor is the sample at t0 when present,
/// otherwise the first sample.
DriftReport drift(const Series& s);
DriftReport drift(const NonlocalConstantSeries& s);

enum class Direction { nonincreasing, nondecreasing };
enum class Sign { nonnegative, nonpositive };

struct MonotoneReport {
    bool holds = true;
    double max_violation = 0.0;  // largest step (or value) against the requested direction
    std::size_t violations = 0;  // count beyond tolerance
    std::size_t first_violation = 0;
};

MonotoneReport check_monotone(std::span<const double> values, Direction dir, double tolerance);
MonotoneReport check_monotone(const Series& s, Direction dir, double tolerance);
/// One-signedness of sampled integrand values.
MonotoneReport check_sign(std::span<const double> values, Sign sign, double tolerance);
/// One-signedness of a quadrature channel's integrand at every node.
MonotoneReport check_channel_sign(const Trajectory& traj, std::string_view channel, Sign sign, double tolerance);

struct ConvergenceRow {
    double rtol = 0.0;
    double max_abs_drift = 0.0;
    double max_rel_drift = 0.0;
};

struct ConvergenceTable {
    std::string name;
    std::vector<ConvergenceRow> rows;
    /// Least-squares slope of log(max_rel_drift) against log(rtol); empty
    /// when the drifts sit at round-off level and carry no rate information.
    std::optional<double> slope;
};

/// Runs `scenario` once per tolerance (atol scaled with it) and fits the drift rate.
using DriftScenario = std::function<DriftReport(const IntegratorConfig&)>;
ConvergenceTable convergence_study(std::string name, const DriftScenario& scenario, std::span<const double> rtols,
                                   IntegratorConfig base = {});

/// Relative drift at or below this is treated as round-off.
inline constexpr double kRoundoffDrift = 1e-13;

}  // namespace nlc::verify
