#include "nlc/system.hpp"

#include <cmath>
#include <stdexcept>

namespace nlc {

Vec LagrangianSystem::acceleration(const State& s) const {
    Vec out(dim);
    accel(s.t, s.q, s.qdot, out);
    return out;
}

double LagrangianSystem::lagrangian_at(const State& s) const { return lagrangian_value(lagrangian, s.t, s.q, s.qdot); }

Vec euler_lagrange_residual(const LagrangianSystem& sys, const State& s, double h) {
    const Vec qddot = sys.acceleration(s);
    const std::size_t n = sys.dim;
    Vec qp(n), qm(n), vp(n), vm(n);
    for (std::size_t i = 0; i < n; ++i) {
        qp[i] = s.q[i] + h * s.qdot[i];
        qm[i] = s.q[i] - h * s.qdot[i];
        vp[i] = s.qdot[i] + h * qddot[i];
        vm[i] = s.qdot[i] - h * qddot[i];
    }
    const Vec pp = grad_qdot(sys.lagrangian, s.t + h, qp, vp);
    const Vec pm = grad_qdot(sys.lagrangian, s.t - h, qm, vm);
    const Vec gq = grad_q(sys.lagrangian, s.t, s.q, s.qdot);
    Vec r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = (pp[i] - pm[i]) / (2.0 * h) - gq[i];
    return r;
}

}  // namespace nlc
