#include "nlc/trajectory.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace nlc {

namespace {

struct Hermite {
    double h00, h10, h01, h11;

    Hermite(double theta, double h) {
        const double t2 = theta * theta;
        const double t3 = t2 * theta;
        h00 = 2 * t3 - 3 * t2 + 1;
        h10 = (t3 - 2 * t2 + theta) * h;
        h01 = -2 * t3 + 3 * t2;
        h11 = (t3 - t2) * h;
    }

    double operator()(double y0, double d0, double y1, double d1) const { return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1; }
};

template <typename T>
void reverse_blocks(std::vector<T>& v, std::size_t stride) {
    if (stride == 0) return;
    const std::size_t count = v.size() / stride;
    for (std::size_t i = 0, j = count - 1; i < j; ++i, --j)
        std::swap_ranges(v.begin() + i * stride, v.begin() + (i + 1) * stride, v.begin() + j * stride);
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("rtol and atol must be positive");
    if (!(h_min <= h_max)) throw std::invalid_argument("h_min must not exceed h_max");
    if (h_min < 0.0 || h_init < 0.0) throw std::invalid_argument("step bounds must be nonnegative");
    if (!(blowup_norm > 0.0)) throw std::invalid_argument("blowup_norm must be positive");
    if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::reached_t_end: return "reached_t_end";
        case Termination::blow_up: return "blow_up";
        case Termination::step_underflow: return "step_underflow";
        case Termination::max_steps: return "max_steps";
        case Termination::approached_domain_boundary: return "approached_domain_boundary";
    }
    return "unknown";
}

Trajectory::Trajectory(SystemPtr system, std::vector<std::string> channel_names, IntegratorConfig config)
    : system_(std::move(system)), channel_names_(std::move(channel_names)), config_(config) {
    if (!system_) throw std::invalid_argument("trajectory needs a system");
}

State Trajectory::node_state(std::size_t i) const {
    const auto qi = q(i);
    const auto vi = qdot(i);
    return State{times_[i], Vec(qi.begin(), qi.end()), Vec(vi.begin(), vi.end())};
}

void Trajectory::push_node(double t, std::span<const double> q, std::span<const double> qdot,
                           std::span<const double> qddot, std::span<const double> channels,
                           std::span<const double> rates) {
    times_.push_back(t);
    q_.insert(q_.end(), q.begin(), q.end());
    qdot_.insert(qdot_.end(), qdot.begin(), qdot.end());
    qddot_.insert(qddot_.end(), qddot.begin(), qddot.end());
    chan_.insert(chan_.end(), channels.begin(), channels.end());
    rate_.insert(rate_.end(), rates.begin(), rates.end());
}

void Trajectory::finish(double t_initial, Termination reason, std::size_t accepted, std::size_t rejected) {
    t_initial_ = t_initial;
    termination_ = reason;
    accepted_ = accepted;
    rejected_ = rejected;
    if (times_.size() > 1 && times_.front() > times_.back()) {
        std::reverse(times_.begin(), times_.end());
        reverse_blocks(q_, dim());
        reverse_blocks(qdot_, dim());
        reverse_blocks(qddot_, dim());
        reverse_blocks(chan_, channel_count());
        reverse_blocks(rate_, channel_count());
    }
}

std::size_t Trajectory::locate(double t) const {
    if (!contains(t)) throw std::out_of_range("time " + std::to_string(t) + " outside trajectory span");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.end()) return times_.size() - 1;
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

State Trajectory::state_at(double t) const {
    const std::size_t i = locate(t);
    if (times_[i] == t || i + 1 == size()) return node_state(i);
    const double h = times_[i + 1] - times_[i];
    const Hermite H((t - times_[i]) / h, h);
    State s{t, Vec(dim()), Vec(dim())};
    const auto q0 = q(i), q1 = q(i + 1), v0 = qdot(i), v1 = qdot(i + 1), a0 = qddot(i), a1 = qddot(i + 1);
    for (std::size_t k = 0; k < dim(); ++k) {
        s.q[k] = H(q0[k], v0[k], q1[k], v1[k]);
        s.qdot[k] = H(v0[k], a0[k], v1[k], a1[k]);
    }
    return s;
}

Vec Trajectory::qddot_at(double t) const {
    const std::size_t i = locate(t);
    if (times_[i] == t || i + 1 == size()) {
        const auto a = qddot(i);
        return Vec(a.begin(), a.end());
    }
    return system_->acceleration(state_at(t));
}

double Trajectory::channel_at(std::size_t c, double t) const {
    if (c >= channel_count()) throw std::out_of_range("channel index");
    const std::size_t i = locate(t);
    if (times_[i] == t || i + 1 == size()) return channel(i, c);
    const double h = times_[i + 1] - times_[i];
    const Hermite H((t - times_[i]) / h, h);
    return H(channel(i, c), channel_rate(i, c), channel(i + 1, c), channel_rate(i + 1, c));
}

std::size_t Trajectory::channel_index(std::string_view name) const {
    for (std::size_t c = 0; c < channel_names_.size(); ++c)
        if (channel_names_[c] == name) return c;
    throw std::invalid_argument("no quadrature channel named '" + std::string(name) + "' was registered");
}

bool Trajectory::has_channel(std::string_view name) const {
    return std::find(channel_names_.begin(), channel_names_.end(), name) != channel_names_.end();
}

}  // namespace nlc
