#include "nlc/autodiff.hpp"

#include <cmath>

namespace nlc {

namespace {

struct DualPoint {
    Dual t;
    std::vector<Dual> q;
    std::vector<Dual> qdot;

    DualPoint(double t_, std::span<const double> q_, std::span<const double> qdot_)
        : t(t_), q(q_.begin(), q_.end()), qdot(qdot_.begin(), qdot_.end()) {}
};

double checked(const Dual& d, double t, std::span<const double> q, std::span<const double> qdot) {
    if (!std::isfinite(d.value) || !std::isfinite(d.deriv)) {
        throw EvaluationError("non-finite Lagrangian evaluation", t, Vec(q.begin(), q.end()),
                              Vec(qdot.begin(), qdot.end()));
    }
    return d.deriv;
}

}  // namespace

double lagrangian_value(const LagrangianFn& L, double t, std::span<const double> q, std::span<const double> qdot) {
    DualPoint p(t, q, qdot);
    const Dual v = L(p.t, p.q, p.qdot);
    if (!std::isfinite(v.value)) {
        throw EvaluationError("non-finite Lagrangian value", t, Vec(q.begin(), q.end()),
                              Vec(qdot.begin(), qdot.end()));
    }
    return v.value;
}

double directional_derivative(const LagrangianFn& L, double t, std::span<const double> q,
                              std::span<const double> qdot, double dt, std::span<const double> dq,
                              std::span<const double> dqdot) {
    DualPoint p(t, q, qdot);
    p.t.deriv = dt;
    for (std::size_t i = 0; i < q.size(); ++i) {
        p.q[i].deriv = dq[i];
        p.qdot[i].deriv = dqdot[i];
    }
    return checked(L(p.t, p.q, p.qdot), t, q, qdot);
}

Vec grad_q(const LagrangianFn& L, double t, std::span<const double> q, std::span<const double> qdot) {
    DualPoint p(t, q, qdot);
    Vec g(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        p.q[i].deriv = 1.0;
        g[i] = checked(L(p.t, p.q, p.qdot), t, q, qdot);
        p.q[i].deriv = 0.0;
    }
    return g;
}

Vec grad_qdot(const LagrangianFn& L, double t, std::span<const double> q, std::span<const double> qdot) {
    DualPoint p(t, q, qdot);
    Vec g(qdot.size());
    for (std::size_t i = 0; i < qdot.size(); ++i) {
        p.qdot[i].deriv = 1.0;
        g[i] = checked(L(p.t, p.q, p.qdot), t, q, qdot);
        p.qdot[i].deriv = 0.0;
    }
    return g;
}

double partial_t(const LagrangianFn& L, double t, std::span<const double> q, std::span<const double> qdot) {
    DualPoint p(t, q, qdot);
    p.t.deriv = 1.0;
    return checked(L(p.t, p.q, p.qdot), t, q, qdot);
}

}  // namespace nlc
