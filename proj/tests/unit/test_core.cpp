#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "nlc/integrate.hpp"
#include "nlc/nonlocal.hpp"
#include "nlc/systems/dissipative.hpp"
#include "nlc/systems/lane_emden.hpp"
#include "nlc/systems/maxwell_bloch.hpp"
#include "nlc/verify.hpp"

using namespace nlc;
using namespace nlc::systems;
using doctest::Approx;

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double boundary_term(const LagrangianSystem& sys, const VariationField& f, const State& s) {
    const Vec acc = sys.acceleration(s);
    return dot(momentum(sys, s), f.delta_q(s, acc));
}

/// Flows `s` to time t with a tight tolerance.
State flow(const SystemPtr& sys, const State& s, double t) {
    IntegratorConfig cfg;
    cfg.rtol = 1e-13;
    cfg.atol = 1e-15;
    const Trajectory tr = integrate(sys, s, t, cfg);
    return tr.node_state(t > s.t ? tr.size() - 1 : 0);
}

struct Case {
    const char* name;
    SystemPtr sys;
    State init;
    std::vector<VariationField> families;
};

std::vector<Case> builtin_cases() {
    std::vector<Case> out;
    const auto d = make_dissipative(2, 0.5, Potential::quadratic());
    out.push_back({"dissipative",
                   d.system,
                   State{0.0, {1.0, -0.5}, {0.3, 0.8}},
                   {family_time_shift_exp(2, 0.5), family_time_shift_exp(2, -0.5), family_time_shift_power(2, 1.0, 2.0),
                    family_scaling({1.0, 0.5}, 1.0)}});
    const auto le = make_lane_emden(3);
    out.push_back({"lane-emden",
                   le.system,
                   State{1.0, {0.8}, {-0.3}},
                   {lane_emden_family(le, LaneEmdenConstant::first), lane_emden_family(le, LaneEmdenConstant::second),
                    lane_emden_family(le, LaneEmdenConstant::third), lane_emden_family(le, LaneEmdenConstant::dyn_sym)}});
    const auto mb = make_maxwell_bloch();
    out.push_back({"maxwell-bloch",
                   mb.system,
                   mb_embed({1.0, 1.0, 1.0, 1.0, -2.0}),
                   {mb_scaling_family(-2.0), family_time_shift_exp(3, 0.3), family_scaling({1.0, 1.0, -2.0}, 0.5)}});
    return out;
}

}  // namespace

TEST_CASE("momentum examples") {
    const auto d = make_dissipative(1, 1.0, Potential::zero());
    CHECK(momentum(*d.system, State{0.0, {0.0}, {2.0}})[0] == 2.0);

    const auto mb = make_maxwell_bloch();
    const Vec p = momentum(*mb.system, State{0.0, {1.0, 3.0, 0.0}, {3.0, -1.0, -1.0}});
    CHECK(p[0] == 3.0);
    CHECK(p[1] == -1.0);
    CHECK(p[2] == 4.0);

    const auto le = make_lane_emden(5);
    CHECK(momentum(*le.system, State{2.0, {1.0}, {0.0}})[0] == 0.0);
}

TEST_CASE("integrand examples") {
    SUBCASE("dissipative a = k, U = 0, at rest") {
        const auto d = make_dissipative(1, 1.0, Potential::zero());
        const State s{0.0, {0.0}, {1.0}};
        const Vec acc = d.system->acceleration(s);
        CHECK(integrand_m(*d.system, family_time_shift_exp(1, 1.0), s, acc) == Approx(0.0));
    }
    SUBCASE("maxwell-bloch scaling a = -2 gives 2E - 3 qdot3^2") {
        const auto mb = make_maxwell_bloch();
        testing::Gen gen;
        for (int i = 0; i < 50; ++i) {
            const State s = gen.state(3, gen.uniform());
            const Vec acc = mb.system->acceleration(s);
            const double E = mb_first_integrals(s).E;
            CHECK(integrand_m(*mb.system, mb_scaling_family(-2.0), s, acc) ==
                  Approx(2.0 * E - 3.0 * s.qdot[2] * s.qdot[2]).epsilon(1e-13));
        }
    }
    SUBCASE("lane-emden t^2 shift at zero velocity") {
        const auto le = make_lane_emden(3);
        const State s{1.5, {0.7}, {0.0}};
        const Vec acc = le.system->acceleration(s);
        CHECK(integrand_m(*le.system, family_time_shift_power(1, 1.0, 2.0), s, acc) == Approx(0.0));
    }
}

TEST_CASE("family constructors produce the documented jets") {
    const State s{0.5, {1.0, -2.0, 0.5}, {0.3, 0.4, -1.0}};
    const Vec acc{0.1, -0.2, 0.7};
    {
        const auto f = family_time_shift_exp(3, 0.7);
        const Vec dq = f.delta_q(s, acc), dv = f.delta_qdot(s, acc);
        for (int i = 0; i < 3; ++i) {
            CHECK(dq[i] == Approx(std::exp(0.35) * s.qdot[i]));
            CHECK(dv[i] == Approx(0.7 * std::exp(0.35) * s.qdot[i] + std::exp(0.35) * acc[i]));
        }
    }
    {
        const auto f = family_time_shift_power(3, -1.0, -2.0);
        const Vec dq = f.delta_q(s, acc);
        for (int i = 0; i < 3; ++i) CHECK(dq[i] == Approx(-s.qdot[i] / 0.25));
    }
    {
        const auto f = family_time_shift_power(3, 1.0, 2.0);
        const Vec dq = f.delta_q(s, acc);
        for (int i = 0; i < 3; ++i) CHECK(dq[i] == Approx(0.25 * s.qdot[i]));
    }
    {
        const auto f = family_scaling({1.0, 1.0, 1.0}, 1.0);
        const Vec dq = f.delta_q(s, acc), dv = f.delta_qdot(s, acc);
        for (int i = 0; i < 3; ++i) {
            CHECK(dq[i] == Approx(s.q[i] + s.t * s.qdot[i]));
            CHECK(dv[i] == Approx(s.qdot[i] + s.qdot[i] + s.t * acc[i]));
        }
    }
    {
        const Vec dq = mb_scaling_family(-2.0).delta_q(s, acc);
        CHECK(dq[0] == s.q[0]);
        CHECK(dq[1] == s.q[1]);
        CHECK(dq[2] == -2.0 * s.q[2]);
    }
    CHECK(family_scaling({0.0, 0.0}, 0.0).is_null());
    CHECK(family_null(2).label() == "null");
    CHECK((family_time_shift_exp(2, 1.0) + family_null(2)).kind() == VariationField::Kind::sum);
}

TEST_CASE("delta qdot is the time derivative of delta q along solutions") {
    const double h = 1e-4;
    for (const auto& c : builtin_cases()) {
        CAPTURE(c.name);
        const Trajectory tr = integrate(c.sys, c.init, c.init.t + 2.0);
        for (const auto& f : c.families) {
            CAPTURE(f.label());
            double worst = 0.0;
            for (std::size_t i = 1; i < tr.size(); i += std::max<std::size_t>(1, tr.size() / 7)) {
                const State s = tr.node_state(i);
                const State sp = flow(c.sys, s, s.t + h), sm = flow(c.sys, s, s.t - h);
                const Vec dp = f.delta_q(sp, c.sys->acceleration(sp)), dm = f.delta_q(sm, c.sys->acceleration(sm));
                const Vec dv = f.delta_qdot(s, c.sys->acceleration(s));
                for (std::size_t k = 0; k < dv.size(); ++k)
                    worst = std::max(worst, std::abs((dp[k] - dm[k]) / (2 * h) - dv[k]) / std::max(1.0, std::abs(dv[k])));
            }
            CHECK(worst < 1e-6);
        }
    }
}

TEST_CASE("pointwise identity: dN/dt equals M to second order") {
    for (const auto& c : builtin_cases()) {
        CAPTURE(c.name);
        const Trajectory tr = integrate(c.sys, c.init, c.init.t + 2.0);
        for (const auto& f : c.families) {
            CAPTURE(f.label());
            for (std::size_t i = 1; i < tr.size(); i += std::max<std::size_t>(1, tr.size() / 5)) {
                const State s = tr.node_state(i);
                const double m = integrand_m(*c.sys, f, s, c.sys->acceleration(s));
                auto err = [&](double h) {
                    const double np = boundary_term(*c.sys, f, flow(c.sys, s, s.t + h));
                    const double nm = boundary_term(*c.sys, f, flow(c.sys, s, s.t - h));
                    return std::abs((np - nm) / (2 * h) - m);
                };
                const double e1 = err(1e-2), e2 = err(5e-3);
                CHECK(e2 < 1e-3 * std::max(1.0, std::abs(m)));
                // Halving h cuts the error by about four unless it is already at round-off.
                if (e1 > 1e-9) CHECK(e2 < 0.35 * e1);
            }
        }
    }
}

TEST_CASE("euler-lagrange residual vanishes at 100 random states per system") {
    testing::Gen gen(testing::kSeed + 2);
    std::vector<std::pair<SystemPtr, std::pair<double, double>>> systems{
        {make_dissipative(2, 0.5, Potential::quadratic()).system, {-2, 2}},
        {make_dissipative(1, 0.2, Potential::table({-1, 0, 1}, {1, 0, 1}, 3.0)).system, {-2, 2}},
        {make_lane_emden(1).system, {0.5, 3}},
        {make_lane_emden(4).system, {0.5, 3}},
        {make_lane_emden(7).system, {0.5, 3}},
        {make_maxwell_bloch().system, {-2, 2}},
    };
    for (const auto& [sys, span] : systems) {
        CAPTURE(sys->name);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const State s = gen.state(sys->dim, gen.uniform(span.first, span.second));
            for (double r : euler_lagrange_residual(*sys, s)) worst = std::max(worst, std::abs(r));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("nonlocal constant examples") {
    SUBCASE("dissipative U = 0, k = 1, a = k") {
        const auto d = make_dissipative(1, 1.0, Potential::zero());
        const auto fam = family_time_shift_exp(1, 1.0);
        const std::vector<VariationField> fams{fam};
        const std::vector<double> as{1.0};
        const Trajectory tr = integrate(d.system, State{0.0, {0.0}, {1.0}}, 5.0, {}, fams, dissipative_channels(d, as));
        const auto c = nonlocal_constant(tr, fam, 0.0);
        CHECK(verify::drift(c).max_rel_drift < 1e-8);
        const auto rearranged = dissipative_rearranged_constant(d, tr, 1.0, 0.0);
        for (double v : rearranged.value) CHECK(v == Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("maxwell-bloch stationary data") {
        const auto mb = make_maxwell_bloch();
        const auto fam = mb_scaling_family();
        const std::vector<VariationField> fams{fam};
        const Trajectory tr = integrate(mb.system, State{0.0, {1.0, 3.0, 0.0}, {3.0, -1.0, -1.0}}, 20.0, {}, fams);
        CHECK(verify::drift(nonlocal_constant(tr, fam, 0.0)).max_rel_drift < 1e-6);
        for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr.qdot(i)[2] == Approx(-1.0).epsilon(1e-9));
    }
    SUBCASE("anchor and range") {
        const auto mb = make_maxwell_bloch();
        const auto fam = mb_scaling_family();
        const std::vector<VariationField> fams{fam};
        const Trajectory tr = integrate(mb.system, mb_embed({1, 1, 1, 1, -2}), 5.0, {}, fams);
        const std::vector<double> ts{1.0, 2.0, 3.0};
        const auto c = nonlocal_constant(tr, fam, 2.0, ts);
        CHECK(c.integral[1] == 0.0);
        const std::vector<double> bad{6.0};
        CHECK_THROWS_AS(nonlocal_constant(tr, fam, 2.0, bad), std::out_of_range);
        CHECK_THROWS_AS(nonlocal_constant(tr, fam, -1.0, ts), std::out_of_range);
    }
}

TEST_CASE("null family gives an identically zero constant") {
    for (const auto& c : builtin_cases()) {
        const Trajectory tr = integrate(c.sys, c.init, c.init.t + 3.0);
        const auto s = nonlocal_constant(tr, family_null(c.sys->dim), c.init.t);
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            CHECK(s.boundary[i] == 0.0);
            CHECK(s.integral[i] == 0.0);
            CHECK(s.value[i] == 0.0);
        }
        const auto zero_scaling = family_scaling(std::vector<double>(c.sys->dim, 0.0), 0.0);
        for (double v : nonlocal_constant(tr, zero_scaling, c.init.t).value) CHECK(v == 0.0);
    }
}

TEST_CASE("the constant is linear in the family") {
    for (const auto& c : builtin_cases()) {
        CAPTURE(c.name);
        const auto& f = c.families[0];
        const auto& g = c.families[1];
        const VariationField fg = f + g;
        const std::vector<VariationField> fams{f, g, fg};
        const Trajectory tr = integrate(c.sys, c.init, c.init.t + 3.0, {}, fams);
        const auto cf = nonlocal_constant(tr, f, c.init.t);
        const auto cg = nonlocal_constant(tr, g, c.init.t);
        const auto cfg = nonlocal_constant(tr, fg, c.init.t);
        for (std::size_t i = 0; i < cf.t.size(); ++i) {
            const double scale = std::max({1.0, std::abs(cf.value[i]), std::abs(cg.value[i])});
            CHECK(std::abs(cfg.value[i] - (cf.value[i] + cg.value[i])) < 1e-12 * scale);
        }
    }
}

TEST_CASE("action examples") {
    SUBCASE("L = 0") {
        const auto d = make_dissipative(1, 0.0, Potential::zero());
        const Trajectory tr = integrate(d.system, State{0.0, {0.3}, {0.0}}, 2.0);
        CHECK(action(tr, 0.0, 2.0) == 0.0);
    }
    SUBCASE("U = 0, k = 1, qdot = e^-t") {
        const auto d = make_dissipative(1, 1.0, Potential::zero());
        const Trajectory tr = integrate(d.system, State{0.0, {0.0}, {1.0}}, 1.0);
        CHECK(action(tr, 0.0, 1.0) == Approx(0.5 * (1.0 - std::exp(-1.0))).epsilon(1e-10));
        CHECK_THROWS_AS(action(tr, 0.0, 2.0), std::out_of_range);
    }
    SUBCASE("rearranged constant at a = 0 is 2E + 2k * action") {
        const auto d = make_dissipative(2, 0.5, Potential::quadratic());
        const std::vector<double> as{0.0};
        const Trajectory tr = integrate(d.system, State{0.0, {1.0, -0.5}, {0.3, 0.8}}, 10.0, {}, {}, dissipative_channels(d, as));
        const auto rearranged = dissipative_rearranged_constant(d, tr, 0.0, 0.0);
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const double rhs = 2.0 * d.dissipative_energy(tr.node_state(i)) + 2.0 * d.k * action(tr, 0.0, tr.time(i));
            CHECK(rearranged.value[i] == Approx(rhs).epsilon(1e-9));
        }
    }
}
