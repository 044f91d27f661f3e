#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "nlc/integrate.hpp"
#include "nlc/nonlocal.hpp"
#include "nlc/systems/maxwell_bloch.hpp"
#include "nlc/verify.hpp"

using namespace nlc;
using namespace nlc::systems;
using doctest::Approx;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }
const State kStationary{0.0, {1.0, 3.0, 0.0}, {3.0, -1.0, -1.0}};
const State kHomoclinic{0.0, {2.0, 0.0, 0.0}, {0.0, 0.0, -1.0}};

}  // namespace

TEST_CASE("first integrals at the printed data") {
    const auto s = mb_first_integrals(kStationary);
    CHECK(s.E == 5.5);
    CHECK(s.B == 4.0);
    CHECK(s.J == -10.0);
    CHECK(s.K == -6.0);
    CHECK(mb_k_cubic_form(kStationary) == Approx(-6.0));
    CHECK(mb_psi(s.E, s.B, -1.0, 0.0) == Approx(-6.0));

    const auto h = mb_first_integrals(kHomoclinic);
    CHECK(h.E == 0.5);
    CHECK(h.B == 1.0);
    CHECK(h.J == 0.0);
    CHECK(h.K == 1.0);
    CHECK(h.K == h.B * h.B * h.B);

    const auto z = mb_first_integrals(State{0.0, {0, 0, 0}, {0, 0, 0}});
    CHECK(z.E == 0.0);
    CHECK(z.B == 0.0);
    CHECK(z.J == 0.0);
    CHECK(z.K == 0.0);
}

TEST_CASE("K forms agree at random states") {
    testing::Gen gen(testing::kSeed + 6);
    for (int i = 0; i < 200; ++i) {
        const State s = gen.state(3, 0.0);
        const auto f = mb_first_integrals(s);
        CHECK(testing::rel_err(mb_k_cubic_form(s), f.K) < 1e-12);
        CHECK(testing::rel_err(mb_k_polynomial_form(s), f.K) < 1e-12);
    }
}

TEST_CASE("jerk matches the derivative of qddot3 along the flow") {
    const auto mb = make_maxwell_bloch();
    testing::Gen gen(testing::kSeed + 7);
    IntegratorConfig cfg;
    cfg.rtol = 1e-13;
    cfg.atol = 1e-15;
    for (int i = 0; i < 20; ++i) {
        const State s = gen.state(3, 0.0);
        const double h = 1e-4;
        const Trajectory fp = integrate(mb.system, s, h, cfg), fm = integrate(mb.system, s, -h, cfg);
        const double d = (mb_q3_accel(fp.node_state(fp.size() - 1)) - mb_q3_accel(fm.node_state(0))) / (2 * h);
        CHECK(mb_q3_jerk(s) == Approx(d).epsilon(1e-6));
    }
}

TEST_CASE("third-order residual") {
    const auto mb = make_maxwell_bloch();
    SUBCASE("stationary solution") {
        const Trajectory tr = integrate(mb.system, kStationary, 20.0);
        const std::vector<double> ts{0.0, 5.0, 10.0, 20.0};
        const auto r = mb_third_order_residual(tr, ts);
        CHECK(std::abs(r.value[0]) < 1e-14);
        for (double v : r.value) CHECK(std::abs(v) < 1e-6);
    }
    SUBCASE("homoclinic solution") {
        const Trajectory tr = integrate(mb.system, kHomoclinic, 10.0);
        std::vector<double> ts;
        for (int i = 0; i <= 1000; ++i) ts.push_back(0.01 * i);
        for (double v : mb_third_order_residual(tr, ts).value) CHECK(std::abs(v) < 1e-6);
    }
    SUBCASE("q = 0, constant qdot3") {
        const double c = 0.7;
        const Trajectory tr = integrate(mb.system, State{0.0, {0, 0, 0}, {0, 0, c}}, 3.0);
        const std::vector<double> ts{0.0, 1.5, 3.0};
        for (double v : mb_third_order_residual(tr, ts).value) CHECK(std::abs(v) < 1e-14);
    }
}

TEST_CASE("phi quadrature") {
    SUBCASE("E = B = K = 0 over [1, 4]") {
        CHECK(mb_phi_quadrature(1.0, 4.0, 0.0, 0.0, 0.0) == Approx(std::sqrt(2.0) * 0.5).epsilon(1e-12));
        CHECK(mb_phi_quadrature(4.0, 1.0, 0.0, 0.0, 0.0) == Approx(-std::sqrt(2.0) * 0.5).epsilon(1e-12));
    }
    SUBCASE("empty interval") { CHECK(mb_phi_quadrature(0.3, 0.3, 3.0, -1.0, -6.0) == 0.0); }
    SUBCASE("homoclinic: phi advances like time") {
        auto u = [](double t) { return 1.0 - 2.0 * sech(t) * sech(t); };
        for (auto [t1, t2] : {std::pair{0.5, 3.0}, std::pair{0.1, 0.2}, std::pair{1.0, 6.0}})
            CHECK(mb_phi_quadrature(u(t1), u(t2), 0.5, 1.0, 1.0) == Approx(t2 - t1).epsilon(1e-9));
        // From the simple root u = -1 at t = 0.
        CHECK(mb_phi_quadrature(-1.0, u(2.0), 0.5, 1.0, 1.0) == Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("reference orbit: root to root") {
        // P(u) = (u + 1)(u^2 - 6): half period between -sqrt(6) and -1, integrable at both ends.
        const double half = mb_phi_quadrature(-std::sqrt(6.0), -1.0, 3.0, -1.0, -6.0);
        CHECK(half > 0.0);
        CHECK(std::isfinite(half));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(mb_phi_quadrature(-3.0, 0.0, 3.0, -1.0, -6.0), std::domain_error);  // crosses roots
        CHECK_THROWS_AS(mb_phi_quadrature(0.0, 1.0, 0.5, 1.0, 1.0), std::domain_error);     // double root endpoint
        CHECK_THROWS_AS(mb_phi_quadrature(-0.5, 0.5, 0.0, 0.0, 0.0), std::domain_error);   // negative inside
    }
}

TEST_CASE("embed and project") {
    const std::array<double, 5> x{0.1, -0.2, 0.3, -0.4, 0.5};
    const State s = mb_embed(x, 2.0, 1.5);
    CHECK(s.t == 1.5);
    CHECK(s.q[2] == 2.0);
    CHECK(mb_project(s) == x);
    CHECK(mb_project(mb_embed({0, 0, 0, 0, 0})) == std::array<double, 5>{0, 0, 0, 0, 0});

    const auto mb = make_maxwell_bloch();
    IntegratorConfig tight;
    tight.rtol = 1e-12;
    tight.atol = 1e-15;
    const Trajectory h = integrate(mb.system, mb_embed({2, 0, 0, 0, -1}), 10.0, tight);
    for (double t = 0.0; t <= 10.0; t += 0.25) {
        const auto p = mb_project(h.state_at(t));
        CHECK(std::abs(p[0] - 2.0 * sech(t)) < 1e-6);
        CHECK(std::abs(p[1] + 2.0 * sech(t) * std::tanh(t)) < 1e-6);
        CHECK(p[2] == 0.0);
        CHECK(p[3] == 0.0);
        CHECK(std::abs(p[4] - (1.0 - 2.0 * sech(t) * sech(t))) < 1e-6);
    }
    const Trajectory st = integrate(mb.system, mb_embed({1, 3, 3, -1, -1}), 20.0);
    for (double t = 0.0; t <= 20.0; t += 0.5) {
        const auto p = mb_project(st.state_at(t));
        CHECK(std::abs(p[0] - (std::cos(t) + 3.0 * std::sin(t))) < 1e-6);
        CHECK(std::abs(p[4] + 1.0) < 1e-9);
    }
}

TEST_CASE("rearranged scaling constant") {
    const auto mb = make_maxwell_bloch();
    SUBCASE("stationary solution") {
        const Trajectory tr = integrate(mb.system, kStationary, 20.0, {}, {}, {mb_channel()});
        CHECK(verify::drift(mb_rearranged_constant(tr, 0.0)).max_rel_drift < 1e-6);
    }
    SUBCASE("homoclinic solution") {
        const Trajectory tr = integrate(mb.system, kHomoclinic, 10.0, {}, {}, {mb_channel()});
        CHECK(verify::drift(mb_rearranged_constant(tr, 0.0)).max_rel_drift < 1e-6);
    }
    SUBCASE("zero state") {
        const Trajectory tr = integrate(mb.system, State{0.0, {0, 0, 0}, {0, 0, 0}}, 5.0, {}, {}, {mb_channel()});
        for (double v : mb_rearranged_constant(tr, 0.0).value) CHECK(v == 0.0);
    }
}

TEST_CASE("first integrals and the stripe along 50 random trajectories") {
    const auto mb = make_maxwell_bloch();
    IntegratorConfig cfg;
    testing::Gen gen(testing::kSeed + 8);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const State init = gen.state(3, 0.0);
        const Trajectory tr = integrate(mb.system, init, 20.0, cfg);
        const auto f0 = mb_first_integrals(init);
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const State s = tr.node_state(i);
            const auto f = mb_first_integrals(s);
            worst = std::max({worst, testing::rel_err(f.E, f0.E), testing::rel_err(f.B, f0.B), testing::rel_err(f.J, f0.J)});
            CHECK(std::abs(s.qdot[2]) <= std::sqrt(2.0 * f0.E) + 1e-9);
        }
    }
    CHECK(worst < 100 * cfg.rtol);
}
