#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "nlc/levelset.hpp"
#include "nlc/scenario.hpp"
#include "nlc/suites.hpp"
#include "nlc/systems/lane_emden.hpp"
#include "nlc/systems/maxwell_bloch.hpp"
#include "nlc/verify.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("nlc");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("NONLOCAL_LOG");
    const std::string level = env ? env : "info";
    if (level == "quiet") spdlog::set_level(spdlog::level::off);
    else if (level == "debug") spdlog::set_level(spdlog::level::debug);
    else {
        spdlog::set_level(spdlog::level::info);
        if (level != "info") spdlog::warn("NONLOCAL_LOG='{}' not recognised, using info", level);
    }
}

// Flags shared by simulate and verify; unset ones leave the scenario untouched.
struct ScenarioFlags {
    std::string config;
    std::string system, family, init, out;
    std::optional<double> t0, t_end, rtol, atol;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::vector<std::string> sets;

    void add_to(CLI::App* app, bool with_out) {
        app->add_option("--config", config, "scenario file (key = value lines)");
        app->add_option("--system", system, "dissipative | lane-emden | maxwell-bloch");
        app->add_option("--family", family, "perturbation family, e.g. mb-scaling:-2, le3, time-shift-exp:0.5");
        app->add_option("--init", init, "initial data, comma separated");
        app->add_option("--t0", t0, "start time");
        app->add_option("--t-end", t_end, "end time");
        app->add_option("--rtol", rtol, "relative tolerance");
        app->add_option("--atol", atol, "absolute tolerance");
        app->add_option("--seed", seed, "seed for randomized checks");
        app->add_option("--samples", samples, "uniform output grid intervals");
        app->add_option("--set", sets, "extra scenario key=value (repeatable)");
        if (with_out) app->add_option("--out", out, "output CSV path (default stdout)");
    }

    bool any_scenario_flag() const {
        return !config.empty() || !system.empty() || !family.empty() || !init.empty() || t0 || t_end || samples ||
               !sets.empty();
    }

    nlc::Scenario build() const {
        nlc::Scenario s = config.empty() ? nlc::Scenario{} : nlc::load_scenario(config);
        if (!system.empty()) s.set("system", system);
        if (!family.empty()) s.set("family", family);
        if (!init.empty()) s.set("init", init);
        if (t0) s.t0 = *t0;
        if (t_end) s.t_end = *t_end;
        if (rtol) s.config.rtol = *rtol;
        if (atol) s.config.atol = *atol;
        if (seed) s.seed = *seed;
        if (samples) s.samples = *samples;
        if (!out.empty()) s.out = out;
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw nlc::ConfigError("--set expects key=value, got '" + kv + "'");
            s.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        return s;
    }
};

// Writes to the path, or stdout for "" / "-".
template <class F>
void with_output(const std::string& path, F&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(path);
    if (!f) throw nlc::ConfigError("cannot open output file '" + path + "'");
    write(f);
}

int cmd_simulate(const ScenarioFlags& flags) {
    const nlc::Scenario s = flags.build();
    const nlc::PreparedScenario p = nlc::prepare(s);
    spdlog::info("simulate {} family {} from t={} to t={}", s.system, p.family.label(), p.init.t, s.t_end);
    nlc::SimulationResult r = nlc::simulate(p);
    const auto& tr = r.trajectory;
    spdlog::debug("{} accepted, {} rejected steps", tr.accepted_steps(), tr.rejected_steps());
    with_output(s.out, [&](std::ostream& o) { nlc::write_trajectory_csv(o, r); });
    if (tr.termination() != nlc::Termination::reached_t_end) {
        const double stopped = s.t_end > p.init.t ? tr.t_end() : tr.t_start();
        std::cerr << fmt::format("note: integration stopped at t={:.17g}: {}; CSV holds the partial trajectory\n", stopped,
                                 nlc::to_string(tr.termination()));
        return tr.termination() == nlc::Termination::approached_domain_boundary ? 0 : kExitFail;
    }
    return 0;
}

void print_drift(const nlc::verify::DriftReport& d) {
    std::cout << fmt::format("  drift {:<40} anchor {:.12g}  max abs {:.3e}  max rel {:.3e} at t={:.6g} (rtol {:.0e})\n",
                             d.name, d.anchor, d.max_abs_drift, d.max_rel_drift, d.time_of_max, d.config.rtol);
}

// Checks of a single scenario: the family's constant, the system's own
// invariants, and the Lane-Emden large-t fit where its hypotheses hold.
int verify_scenario(const nlc::Scenario& s) {
    using namespace nlc;
    const PreparedScenario p = prepare(s);
    SimulationResult r = simulate(p);
    const Trajectory& tr = r.trajectory;
    bool ok = tr.termination() == Termination::reached_t_end;
    std::cout << fmt::format("scenario {} family {}: termination {}\n", s.system, p.family.label(),
                             to_string(tr.termination()));
    constexpr double kDriftTol = 1e-6;
    if (!p.family.is_null()) {
        const auto d = verify::drift(nonlocal_constant(tr, p.family, tr.t_initial()));
        print_drift(d);
        const bool pass = d.max_rel_drift < kDriftTol;
        ok &= pass;
        std::cout << fmt::format("[{}] nonlocal constant relative drift < {:.0e}\n", pass ? "PASS" : "FAIL", kDriftTol);
    }
    if (s.system == "maxwell-bloch") {
        for (const auto& c : p.locals) {
            Series ser{c.name, tr.t_initial(), {}, {}, s.config};
            for (std::size_t i = 0; i < tr.size(); ++i) {
                ser.t.push_back(tr.time(i));
                ser.value.push_back(c.value(tr.node_state(i)));
            }
            const auto d = verify::drift(ser);
            print_drift(d);
            const bool pass = d.max_rel_drift < 100.0 * s.config.rtol;
            ok &= pass;
            std::cout << fmt::format("[{}] first integral {} relative drift < 100 rtol\n", pass ? "PASS" : "FAIL", c.name);
        }
    } else if (s.system == "lane-emden") {
        const auto le = systems::make_lane_emden(s.lane_emden_n);
        std::vector<double> en;
        for (std::size_t i = 0; i < tr.size(); ++i) en.push_back(le.energy(tr.node_state(i)));
        const auto mono =
            verify::check_monotone(en, verify::Direction::nonincreasing, 100.0 * s.config.rtol * std::max(1.0, en.front()));
        ok &= mono.holds;
        std::cout << fmt::format("[{}] energy nonincreasing in t (worst violation {:.2e})\n", mono.holds ? "PASS" : "FAIL",
                                 mono.max_violation);
        try {
            const double lo = std::max(10.0, tr.t_start()), hi = tr.t_end();
            const auto fit = systems::lane_emden_asymptotics(le, tr, lo, hi);
            std::cout << fmt::format("  asymptotics on [{:.6g}, {:.6g}]: c1 {:.6g} c2 {:.6g} c3 {:.6g} c4 {:.6g} slope {:.4f}\n",
                                     fit.t_lo, fit.t_hi, fit.c1, fit.c2, fit.c3, fit.c4, fit.q_slope);
        } catch (const systems::UnsupportedCase& e) {
            std::cout << "  asymptotics: unsupported case: " << e.what() << '\n';
        } catch (const std::invalid_argument& e) {
            std::cout << "  asymptotics: skipped: " << e.what() << '\n';
        }
    } else if (s.system == "dissipative") {
        std::cout << "  (dissipative estimates are checked by the suite; see 'verify dissipative')\n";
    }
    std::cout << (ok ? "scenario passed\n" : "scenario FAILED\n");
    return ok ? 0 : kExitFail;
}

int cmd_verify(const std::string& suite, const ScenarioFlags& flags) {
    if (suite.empty()) {
        if (!flags.any_scenario_flag()) throw nlc::ConfigError("verify needs a suite name or a scenario (--config)");
        return verify_scenario(flags.build());
    }

    nlc::suites::SuiteOptions opt;
    if (flags.rtol) opt.config.rtol = *flags.rtol;
    if (flags.atol) opt.config.atol = *flags.atol;
    else if (flags.rtol) opt.config.atol = *flags.rtol * 1e-3;
    if (flags.seed) opt.seed = *flags.seed;
    try {
        opt.config.validate();
    } catch (const std::invalid_argument& e) {
        throw nlc::ConfigError(e.what());
    }
    const auto ids = nlc::suites::criteria_for(suite);
    spdlog::info("verify {}: criteria {} (rtol {:.0e}, seed {})", suite, ids.size(), opt.config.rtol, opt.seed);
    const std::string_view system = suite == "all" ? std::string_view{} : std::string_view{suite};
    int failed = 0;
    for (int id : ids) {
        const auto r = nlc::suites::run_criterion(id, opt, system);
        std::cout << fmt::format("[{}] criterion {:2d}: {} ({:.2f} s)\n", r.passed ? "PASS" : "FAIL", r.id, r.title, r.seconds);
        std::cout << r.detail;
        failed += r.passed ? 0 : 1;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", ids.size() - static_cast<std::size_t>(failed), ids.size());
    return failed == 0 ? 0 : kExitFail;
}

int cmd_levelset(const std::string& ebk, const std::string& init, const std::string& window, const std::string& grid,
                 bool polish, const std::string& out) {
    using namespace nlc;
    double E, B, K;
    std::optional<verify::Point> start;
    if (!ebk.empty() && !init.empty()) throw ConfigError("give either --ebk or --init, not both");
    if (!ebk.empty()) {
        const auto v = parse_list(ebk);
        if (v.size() != 3) throw ConfigError("--ebk needs E,B,K");
        E = v[0], B = v[1], K = v[2];
    } else {
        const auto x = init.empty() ? std::vector<double>{1.0, 1.0, 1.0, 1.0, -2.0} : parse_list(init);
        if (x.size() != 5 && x.size() != 6) throw ConfigError("--init needs x1,y1,x2,y2,z");
        const State s = systems::mb_embed({x[0], x[1], x[2], x[3], x[4]});
        const auto f = systems::mb_first_integrals(s);
        E = f.E, B = f.B, K = f.K;
        start = verify::Point{s.qdot[2], systems::mb_q3_accel(s)};
    }
    const auto w = parse_list(window);
    if (w.size() != 4) throw ConfigError("--window needs u_lo,u_hi,v_lo,v_hi");
    for (double x : w)
        if (!std::isfinite(x)) throw ConfigError("--window must be finite");
    verify::LevelSetOptions opt;
    opt.initial = start;
    opt.newton_polish = polish;
    const auto g = parse_list(grid);
    if (g.size() == 1) opt.grid_u = opt.grid_v = static_cast<std::size_t>(g[0]);
    else if (g.size() == 2) opt.grid_u = static_cast<std::size_t>(g[0]), opt.grid_v = static_cast<std::size_t>(g[1]);
    else throw ConfigError("--grid needs N or NU,NV");
    if (opt.grid_u < 32 || opt.grid_v < 32) throw ConfigError("--grid must be at least 32");
    const auto comps = verify::level_set(E, B, K, verify::Window{w[0], w[1], w[2], w[3]}, opt);
    spdlog::info("level set E={} B={} K={}: {} component(s)", E, B, K, comps.size());
    with_output(out, [&](std::ostream& o) { write_levelset_csv(o, comps); });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Nonlocal constants of motion for Lagrangian systems"};
    app.require_subcommand(1);

    ScenarioFlags sim_flags;
    auto* sim = app.add_subcommand("simulate", "integrate a scenario and write its trajectory CSV");
    sim_flags.add_to(sim, true);

    ScenarioFlags ver_flags;
    std::string suite;
    auto* ver = app.add_subcommand("verify", "run a verification suite or check a scenario");
    ver->add_option("suite", suite, "dissipative | lane-emden | maxwell-bloch | all");
    ver_flags.add_to(ver, false);

    std::string ebk, ls_init, window = "-4,4,-6,6", grid = "256", ls_out;
    bool polish = false;
    auto* ls = app.add_subcommand("levelset", "trace psi_{E,B} = K for Maxwell-Bloch data");
    ls->add_option("--ebk", ebk, "E,B,K");
    ls->add_option("--init", ls_init, "x1,y1,x2,y2,z (default: 1,1,1,1,-2)");
    ls->add_option("--window", window, "u_lo,u_hi,v_lo,v_hi")->capture_default_str();
    ls->add_option("--grid", grid, "cells per side, N or NU,NV")->capture_default_str();
    ls->add_flag("--polish", polish, "Newton-polish the vertices");
    ls->add_option("--out", ls_out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(sim_flags);
        if (*ver) return cmd_verify(suite, ver_flags);
        if (*ls) return cmd_levelset(ebk, ls_init, window, grid, polish, ls_out);
    } catch (const nlc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nlc::IntegrationError& e) {
        std::cerr << "integration failed: " << e.what() << " (last good t=" << e.last_good().t << ")\n";
        return kExitFail;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitConfig;
}
