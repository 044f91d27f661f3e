#include "nlc/nonlocal.hpp"

#include <stdexcept>

#include "nlc/integrate.hpp"

namespace nlc {

Vec momentum(const LagrangianSystem& sys, const State& s) { return grad_qdot(sys.lagrangian, s.t, s.q, s.qdot); }

double integrand_m(const LagrangianSystem& sys, const VariationField& family, const State& s,
                   std::span<const double> qddot) {
    const Vec dq = family.delta_q(s, qddot);
    const Vec dqdot = family.delta_qdot(s, qddot);
    return directional_derivative(sys.lagrangian, s.t, s.q, s.qdot, 0.0, dq, dqdot);
}

NonlocalConstantSeries nonlocal_constant(const Trajectory& traj, const VariationField& family, double t0,
                                         std::span<const double> sample_times) {
    if (!traj.contains(t0)) throw std::out_of_range("anchor time outside trajectory span");
    for (double t : sample_times)
        if (!traj.contains(t)) throw std::out_of_range("sample time outside trajectory span");

    NonlocalConstantSeries out;
    out.name = "C[" + family.label() + "]";
    out.t0 = t0;
    out.config = traj.config();
    out.t.assign(sample_times.begin(), sample_times.end());
    out.boundary.resize(sample_times.size());
    out.integral.resize(sample_times.size());
    out.value.resize(sample_times.size());
    if (family.is_null()) return out;

    const std::size_t c = traj.channel_index(family_channel_name(family));
    const double anchor = traj.channel_at(c, t0);
    const LagrangianSystem& sys = traj.system();
    for (std::size_t k = 0; k < sample_times.size(); ++k) {
        const double t = sample_times[k];
        const State s = traj.state_at(t);
        const Vec qdd = traj.qddot_at(t);
        const Vec p = momentum(sys, s);
        const Vec dq = family.delta_q(s, qdd);
        double n = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) n += p[i] * dq[i];
        out.boundary[k] = n;
        out.integral[k] = t == t0 ? 0.0 : traj.channel_at(c, t) - anchor;
        out.value[k] = out.boundary[k] - out.integral[k];
    }
    return out;
}

NonlocalConstantSeries nonlocal_constant(const Trajectory& traj, const VariationField& family, double t0) {
    return nonlocal_constant(traj, family, t0, traj.times());
}

double action(const Trajectory& traj, double t0, double t1) {
    if (!traj.contains(t0) || !traj.contains(t1)) throw std::out_of_range("action interval outside trajectory span");
    const std::size_t c = traj.channel_index(kActionChannel);
    return traj.channel_at(c, t1) - traj.channel_at(c, t0);
}

}  // namespace nlc
