#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "nlc/autodiff.hpp"
#include "nlc/systems/dissipative.hpp"
#include "nlc/systems/lane_emden.hpp"
#include "nlc/systems/maxwell_bloch.hpp"

using namespace nlc;
using doctest::Approx;

TEST_CASE("dual arithmetic follows product and quotient rules") {
    const Dual a{3.0, 1.0}, b{2.0, -0.5};
    const Dual p = a * b;
    CHECK(p.value == 6.0);
    CHECK(p.deriv == doctest::Approx(3.0 * -0.5 + 1.0 * 2.0));
    const Dual q = a / b;
    CHECK(q.deriv == Approx((1.0 * 2.0 - 3.0 * -0.5) / 4.0));
    const Dual s = a - 2.0 * b + 1.0;
    CHECK(s.value == 0.0);
    CHECK(s.deriv == 2.0);
}

TEST_CASE("elementary functions carry the chain rule") {
    const double x = 0.7;
    const Dual d{x, 1.0};
    CHECK(exp(d).deriv == Approx(std::exp(x)));
    CHECK(log(d).deriv == Approx(1.0 / x));
    CHECK(sin(d).deriv == Approx(std::cos(x)));
    CHECK(cos(d).deriv == Approx(-std::sin(x)));
    CHECK(tanh(d).deriv == Approx(1.0 - std::tanh(x) * std::tanh(x)));
    CHECK(sech(d).deriv == Approx(-std::tanh(x) / std::cosh(x)));
    CHECK(sqrt(d).deriv == Approx(0.5 / std::sqrt(x)));
    CHECK(pow(d, 2.5).deriv == Approx(2.5 * std::pow(x, 1.5)));
}

TEST_CASE("integer powers are exact for negative bases") {
    CHECK(ipow(-2.0, 3) == -8.0);
    CHECK(ipow(-2.0, 4) == 16.0);
    CHECK(ipow(5.0, 0) == 1.0);
    const Dual d = ipow(Dual{-1.5, 1.0}, 5);
    CHECK(d.value == -1.5 * 1.5 * 1.5 * 1.5 * 1.5);
    CHECK(d.deriv == 5.0 * 1.5 * 1.5 * 1.5 * 1.5);
}

TEST_CASE("gradient examples") {
    SUBCASE("quadratic kinetic term") {
        LagrangianFn L = [](const Dual&, std::span<const Dual>, std::span<const Dual> v) { return 0.5 * v[0] * v[0]; };
        const Vec q{0.0}, v{3.0};
        CHECK(grad_qdot(L, 0.0, q, v)[0] == 3.0);
    }
    SUBCASE("maxwell-bloch at the stationary data") {
        const auto mb = systems::make_maxwell_bloch();
        const Vec q{1.0, 3.0, 0.0}, v{3.0, -1.0, -1.0};
        const Vec g = grad_q(mb.system->lagrangian, 0.0, q, v);
        CHECK(g[0] == -1.0);
        CHECK(g[1] == -3.0);
        CHECK(g[2] == 0.0);
    }
    SUBCASE("lane-emden n = 3") {
        const auto le = systems::make_lane_emden(3);
        const Vec q{1.0}, v{0.0};
        CHECK(grad_q(le.system->lagrangian, 2.0, q, v)[0] == -4.0);
    }
}

TEST_CASE("non-finite values raise an evaluation error with the state") {
    LagrangianFn L = [](const Dual&, std::span<const Dual> q, std::span<const Dual>) { return log(q[0]); };
    const Vec q{-1.0}, v{0.0};
    CHECK_THROWS_AS(lagrangian_value(L, 0.0, q, v), EvaluationError);
    try {
        grad_q(L, 0.5, q, v);
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(e.t() == 0.5);
        CHECK(e.q()[0] == -1.0);
    }
}

namespace {

struct Named {
    const char* name;
    SystemPtr sys;
    double t_lo, t_hi;
};

std::vector<Named> builtin_lagrangians() {
    std::vector<Named> out;
    out.push_back({"dissipative quadratic", systems::make_dissipative(2, 0.5, systems::Potential::quadratic()).system, -2, 2});
    out.push_back({"dissipative table",
                   systems::make_dissipative(2, 0.3, systems::Potential::table({-1, 0, 1, 2}, {1, 0, 0.5, 0.2}, 2.0)).system,
                   -2, 2});
    for (int n : {1, 2, 3, 5, 7}) out.push_back({"lane-emden", systems::make_lane_emden(n).system, 0.5, 3});
    out.push_back({"maxwell-bloch", systems::make_maxwell_bloch().system, -2, 2});
    return out;
}

}  // namespace

TEST_CASE("autodiff gradients match central differences on 1000 random states") {
    testing::Gen gen(testing::kSeed);
    const double h = 1e-6;
    for (const auto& c : builtin_lagrangians()) {
        CAPTURE(c.name);
        const auto& L = c.sys->lagrangian;
        const std::size_t n = c.sys->dim;
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const double t = gen.uniform(c.t_lo, c.t_hi);
            Vec q = gen.vec(n), v = gen.vec(n);
            const Vec gq = grad_q(L, t, q, v), gv = grad_qdot(L, t, q, v);
            for (std::size_t i = 0; i < n; ++i) {
                auto fd = [&](Vec& x) {
                    const double x0 = x[i];
                    x[i] = x0 + h;
                    const double fp = lagrangian_value(L, t, q, v);
                    x[i] = x0 - h;
                    const double fm = lagrangian_value(L, t, q, v);
                    x[i] = x0;
                    return (fp - fm) / (2 * h);
                };
                // Relative to the gradient scale, with unit floor.
                worst = std::max(worst, std::abs(fd(q) - gq[i]) / std::max(1.0, std::abs(gq[i])));
                worst = std::max(worst, std::abs(fd(v) - gv[i]) / std::max(1.0, std::abs(gv[i])));
            }
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("duals are exact on polynomial lagrangians") {
    testing::Gen gen(testing::kSeed + 1);
    const auto mb = systems::make_maxwell_bloch();
    for (int trial = 0; trial < 100; ++trial) {
        const Vec q = gen.vec(3), v = gen.vec(3);
        const Vec gq = grad_q(mb.system->lagrangian, 0.0, q, v);
        const Vec gv = grad_qdot(mb.system->lagrangian, 0.0, q, v);
        CHECK(gq[0] == q[0] * v[2]);
        CHECK(gq[1] == q[1] * v[2]);
        CHECK(gv[2] == v[2] + 0.5 * (q[0] * q[0] + q[1] * q[1]));
    }
}
