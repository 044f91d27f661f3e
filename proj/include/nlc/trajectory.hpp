#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlc/system.hpp"

namespace nlc {

struct IntegratorConfig {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 0.0;  // 0 selects the starting step automatically
    double h_min = 0.0;
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 5'000'000;
    double blowup_norm = 1e8;

    /// Throws std::invalid_argument on nonpositive tolerances or h_min > h_max.
    void validate() const;
};

enum class Termination { reached_t_end, blow_up, step_underflow, max_steps, approached_domain_boundary };

std::string_view to_string(Termination t);

/// Accepted-step nodes of an integrated solution with cubic Hermite dense output.
///
/// Position uses (q, qdot) at both ends of a step, velocity uses (qdot, qddot),
/// and each quadrature channel uses its value and integrand. Accelerations at
/// off-node times are recomputed from the interpolated state.
class Trajectory {
public:
    Trajectory(SystemPtr system, std::vector<std::string> channel_names, IntegratorConfig config);

    const LagrangianSystem& system() const { return *system_; }
    const SystemPtr& system_ptr() const { return system_; }
    const IntegratorConfig& config() const { return config_; }

    std::size_t size() const { return times_.size(); }
    std::size_t dim() const { return system_->dim; }
    std::size_t channel_count() const { return channel_names_.size(); }

    double t_start() const { return times_.front(); }
    double t_end() const { return times_.back(); }
    /// Time of the initial condition; every channel is zero there.
    double t_initial() const { return t_initial_; }
    bool contains(double t) const { return !times_.empty() && t >= t_start() && t <= t_end(); }

    std::span<const double> times() const { return times_; }
    double time(std::size_t i) const { return times_[i]; }
    std::span<const double> q(std::size_t i) const { return {&q_[i * dim()], dim()}; }
    std::span<const double> qdot(std::size_t i) const { return {&qdot_[i * dim()], dim()}; }
    std::span<const double> qddot(std::size_t i) const { return {&qddot_[i * dim()], dim()}; }
    double channel(std::size_t i, std::size_t c) const { return chan_[i * channel_count() + c]; }
    double channel_rate(std::size_t i, std::size_t c) const { return rate_[i * channel_count() + c]; }
    State node_state(std::size_t i) const;

    /// Dense output. Exact node values at node times; std::out_of_range outside the span.
    State state_at(double t) const;
    Vec qddot_at(double t) const;
    double channel_at(std::size_t c, double t) const;

    const std::vector<std::string>& channel_names() const { return channel_names_; }
    /// Throws std::invalid_argument when no channel has that name.
    std::size_t channel_index(std::string_view name) const;
    bool has_channel(std::string_view name) const;

    Termination termination() const { return termination_; }
    std::size_t accepted_steps() const { return accepted_; }
    std::size_t rejected_steps() const { return rejected_; }

    // Construction interface used by the integrator.
    void push_node(double t, std::span<const double> q, std::span<const double> qdot, std::span<const double> qddot,
                   std::span<const double> channels, std::span<const double> rates);
    void finish(double t_initial, Termination reason, std::size_t accepted, std::size_t rejected);

private:
    std::size_t locate(double t) const;

    SystemPtr system_;
    std::vector<std::string> channel_names_;
    IntegratorConfig config_;
    std::vector<double> times_;
    std::vector<double> q_, qdot_, qddot_, chan_, rate_;
    double t_initial_ = 0.0;
    Termination termination_ = Termination::reached_t_end;
    std::size_t accepted_ = 0;
    std::size_t rejected_ = 0;
};

}  // namespace nlc
