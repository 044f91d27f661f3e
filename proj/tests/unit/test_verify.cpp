#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "nlc/integrate.hpp"
#include "nlc/levelset.hpp"
#include "nlc/nonlocal.hpp"
#include "nlc/suites.hpp"
#include "nlc/systems/dissipative.hpp"
#include "nlc/systems/maxwell_bloch.hpp"
#include "nlc/verify.hpp"

using namespace nlc;
using namespace nlc::systems;
using doctest::Approx;

TEST_CASE("drift report") {
    Series flat{"flat", 0.0, {0.0, 1.0, 2.0}, {5.0, 5.0, 5.0}, {}};
    const auto d0 = verify::drift(flat);
    CHECK(d0.max_abs_drift == 0.0);
    CHECK(d0.max_rel_drift == 0.0);
    CHECK(d0.anchor == 5.0);

    Series s{"s", 1.0, {0.0, 1.0, 2.0}, {4.0, 3.0, 2.5}, {}};
    const auto d = verify::drift(s);
    CHECK(d.anchor == 3.0);
    CHECK(d.max_abs_drift == 1.0);
    CHECK(d.max_rel_drift == Approx(1.0 / 3.0));
    CHECK(d.time_of_max == 0.0);

    Series small{"small", 0.0, {0.0, 1.0}, {0.0, 1e-3}, {}};
    CHECK(verify::drift(small).max_rel_drift == 1e-3);  // denominator max(|C0|, 1)

    Series one{"one", 0.0, {0.0}, {1.0}, {}};
    CHECK_THROWS_AS(verify::drift(one), std::invalid_argument);
}

TEST_CASE("drift examples on trajectories") {
    SUBCASE("maxwell-bloch rearranged constant on the stationary solution") {
        const auto mb = make_maxwell_bloch();
        const Trajectory tr = integrate(mb.system, State{0.0, {1.0, 3.0, 0.0}, {3.0, -1.0, -1.0}}, 20.0, {}, {}, {mb_channel()});
        CHECK(verify::drift(mb_rearranged_constant(tr, 0.0)).max_rel_drift < 1e-6);
    }
    SUBCASE("dissipative a = k, U = 0") {
        const auto d = make_dissipative(1, 1.0, Potential::zero());
        const std::vector<double> as{1.0};
        const Trajectory tr = integrate(d.system, State{0.0, {0.0}, {1.0}}, 5.0, {}, {}, dissipative_channels(d, as));
        CHECK(verify::drift(dissipative_rearranged_constant(d, tr, 1.0, 0.0)).max_rel_drift < 1e-8);
    }
}

TEST_CASE("monotone and sign checks") {
    const std::vector<double> flat{1, 1, 1, 1};
    CHECK(verify::check_monotone(flat, verify::Direction::nonincreasing, 0.0).holds);
    CHECK(verify::check_monotone(flat, verify::Direction::nondecreasing, 0.0).holds);

    const std::vector<double> bumpy{3, 2, 2.5, 1, 1.2};
    const auto r = verify::check_monotone(bumpy, verify::Direction::nonincreasing, 0.0);
    CHECK_FALSE(r.holds);
    CHECK(r.violations == 2);
    CHECK(r.first_violation == 2);
    CHECK(r.max_violation == Approx(0.5));
    CHECK(verify::check_monotone(bumpy, verify::Direction::nonincreasing, 0.6).holds);

    const std::vector<double> signs{0.0, 1.0, -1e-12};
    CHECK_FALSE(verify::check_sign(signs, verify::Sign::nonnegative, 0.0).holds);
    CHECK(verify::check_sign(signs, verify::Sign::nonnegative, 1e-11).holds);
}

TEST_CASE("convergence study") {
    const std::vector<double> ladder{1e-6, 1e-8, 1e-10};
    SUBCASE("dissipative a = k: drift falls with rtol") {
        const auto d = make_dissipative(2, 0.5, Potential::quadratic());
        const auto fam = family_time_shift_exp(2, 0.5);
        const auto table = verify::convergence_study(
            "dissipative", [&](const IntegratorConfig& cfg) {
                const std::vector<VariationField> fams{fam};
                const Trajectory tr = integrate(d.system, State{0.0, {1.0, -0.5}, {0.3, 0.8}}, 10.0, cfg, fams);
                return verify::drift(nonlocal_constant(tr, fam, 0.0));
            },
            ladder);
        REQUIRE(table.rows.size() == 3);
        CHECK(table.rows[0].max_rel_drift > table.rows[1].max_rel_drift);
        CHECK(table.rows[1].max_rel_drift > table.rows[2].max_rel_drift);
        REQUIRE(table.slope);
        CHECK(*table.slope >= 0.8);
    }
    SUBCASE("null family: slope undefined") {
        const auto mb = make_maxwell_bloch();
        const auto table = verify::convergence_study(
            "null", [&](const IntegratorConfig& cfg) {
                const Trajectory tr = integrate(mb.system, mb_embed({1, 1, 1, 1, -2}), 5.0, cfg);
                return verify::drift(nonlocal_constant(tr, family_null(3), 0.0));
            },
            ladder);
        for (const auto& row : table.rows) CHECK(row.max_rel_drift == 0.0);
        CHECK_FALSE(table.slope.has_value());
    }
    SUBCASE("maxwell-bloch rearranged constant") {
        const auto mb = make_maxwell_bloch();
        const auto table = verify::convergence_study(
            "mb", [&](const IntegratorConfig& cfg) {
                const Trajectory tr = integrate(mb.system, mb_embed({1, 1, 1, 1, -2}), 20.0, cfg, {}, {mb_channel()});
                return verify::drift(mb_rearranged_constant(tr, 0.0));
            },
            ladder);
        CHECK(table.rows[0].max_rel_drift > table.rows[1].max_rel_drift);
        CHECK(table.rows[1].max_rel_drift > table.rows[2].max_rel_drift);
    }
}

TEST_CASE("canonical and rearranged constants drift alike") {
    // Integration-by-parts pairs agree within a factor of 10.
    for (const auto& c : suites::shipped_pairs()) {
        if (c.system == "maxwell-bloch") continue;
        CAPTURE(c.name);
        for (double rtol : {1e-8, 1e-9}) {
            IntegratorConfig cfg;
            cfg.rtol = rtol;
            cfg.atol = rtol * 1e-3;
            const auto [canon, rearranged] = c.run(cfg);
            CHECK(rearranged.max_rel_drift <= 10.0 * canon.max_rel_drift);
            CHECK(canon.max_rel_drift <= 10.0 * rearranged.max_rel_drift);
        }
    }
    // The Maxwell-Bloch form swaps the integral of 2E for 2E t; the two differ by 2 * integral (E - E0).
    const auto mb = make_maxwell_bloch();
    const auto fam = mb_scaling_family(-2.0);
    const std::vector<VariationField> fams{fam};
    const Trajectory tr = integrate(mb.system, mb_embed({1, 1, 1, 1, -2}), 20.0, {}, fams, {mb_channel()});
    const auto canon = nonlocal_constant(tr, fam, 0.0);
    const auto rearranged = mb_rearranged_constant(tr, 0.0);
    const double E0 = mb_first_integrals(tr.node_state(0)).E;
    const std::size_t sq = tr.channel_index(kMbChannel);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        // 2 * integral of E from the M channel: M = 2E - 3 qdot3^2.
        const double int_e2 = canon.integral[i] + 3.0 * tr.channel(i, sq);
        const double predicted = int_e2 - 2.0 * E0 * tr.time(i) + (2.0 * E0 - 2.0 * mb_first_integrals(tr.node_state(i)).E) * tr.time(i);
        CHECK(std::abs((rearranged.value[i] - canon.value[i]) - (rearranged.value[0] - canon.value[0]) - predicted) < 1e-12);
    }
}

TEST_CASE("level set") {
    using verify::Point;
    using verify::Window;
    SUBCASE("reference data") {
        const State s = mb_embed({1, 1, 1, 1, -2});
        const auto f = mb_first_integrals(s);
        CHECK(f.E == 3.0);
        CHECK(f.B == -1.0);
        CHECK(f.K == -6.0);
        CHECK(mb_q3_accel(s) == -2.0);
        verify::LevelSetOptions opt;
        opt.initial = Point{-2.0, -2.0};
        const Window w{-4, 4, -6, 6};
        const auto comps = verify::level_set(f.E, f.B, f.K, w, opt);
        CHECK(comps.size() >= 2);
        int accessible = 0;
        for (const auto& c : comps) {
            accessible += c.accessible();
            for (const auto& p : c.vertices) CHECK(std::abs(mb_psi(f.E, f.B, p.u, p.v) - f.K) < 1e-3 * w.scale());
        }
        CHECK(accessible == 1);
        for (const auto& c : comps)
            if (c.accessible()) CHECK(c.closed);
    }
    SUBCASE("homoclinic nodal cubic passes through (1, 0)") {
        const Window w{-2, 2, -2, 2};
        const auto comps = verify::level_set(0.5, 1.0, 1.0, w);
        REQUIRE_FALSE(comps.empty());
        double best = 1e9;
        for (const auto& c : comps)
            for (const auto& p : c.vertices) best = std::min(best, std::hypot(p.u - 1.0, p.v));
        CHECK(best < 2.0 * std::hypot(4.0 / 256, 4.0 / 256));
    }
    SUBCASE("level far above the window maximum") {
        CHECK(verify::level_set(3.0, -1.0, 1e6, Window{-4, 4, -6, 6}).empty());
    }
    SUBCASE("degenerate inputs") {
        CHECK(verify::level_set(3.0, -1.0, -6.0, Window{1, 1, 0, 1}).empty());
        verify::LevelSetOptions small;
        small.grid_u = 16;
        CHECK_THROWS_AS(verify::level_set(3.0, -1.0, -6.0, Window{-4, 4, -6, 6}, small), std::invalid_argument);
    }
    SUBCASE("newton polish tightens vertices") {
        const Window w{-4, 4, -6, 6};
        auto worst = [&](bool polish) {
            verify::LevelSetOptions opt;
            opt.newton_polish = polish;
            double m = 0.0;
            for (const auto& c : verify::level_set(3.0, -1.0, -6.0, w, opt))
                for (const auto& p : c.vertices) m = std::max(m, std::abs(mb_psi(3.0, -1.0, p.u, p.v) + 6.0));
            return m;
        };
        CHECK(worst(true) < 0.1 * worst(false));
    }
    SUBCASE("marching squares on a circle") {
        const auto chains = verify::marching_squares([](double u, double v) { return u * u + v * v - 1.0; },
                                                     Window{-2, 2, -2, 2}, 64, 64, nullptr);
        REQUIRE(chains.size() == 1);
        for (const auto& p : chains[0]) CHECK(std::hypot(p.u, p.v) == Approx(1.0).epsilon(5e-3));
    }
}
