#include "nlc/scenario.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/core.h>

#include "nlc/nonlocal.hpp"
#include "nlc/systems/dissipative.hpp"
#include "nlc/systems/lane_emden.hpp"
#include "nlc/systems/maxwell_bloch.hpp"

namespace nlc {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw ConfigError(fmt::format("{}: '{}' is not a number", key, text));
    return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
    const double v = parse_number(key, text);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError(fmt::format("{}: '{}' is not an integer", key, text));
    return static_cast<long long>(v);
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    const long long v = parse_integer(key, text);
    if (v < 0) throw ConfigError(fmt::format("{}: must be >= 0", key));
    return static_cast<std::size_t>(v);
}

std::string fmt_g17(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& item : split(text, ',')) out.push_back(parse_number("list", item));
    return out;
}

void Scenario::set(const std::string& key_in, const std::string& value_in) {
    const std::string key = trim(key_in);
    const std::string value = trim(value_in);
    if (key == "system") system = value;
    else if (key == "family") family = value;
    else if (key == "init") init = parse_list(value);
    else if (key == "t0") t0 = parse_number(key, value);
    else if (key == "t_end") t_end = parse_number(key, value);
    else if (key == "rtol") config.rtol = parse_number(key, value);
    else if (key == "atol") config.atol = parse_number(key, value);
    else if (key == "h_max") config.h_max = parse_number(key, value);
    else if (key == "max_steps") config.max_steps = parse_count(key, value);
    else if (key == "blowup_norm") config.blowup_norm = parse_number(key, value);
    else if (key == "samples") samples = parse_count(key, value);
    else if (key == "out") out = value;
    else if (key == "seed") seed = static_cast<std::uint64_t>(parse_count(key, value));
    else if (key == "dissipative.dim") dissipative_dim = parse_count(key, value);
    else if (key == "dissipative.k") dissipative_k = parse_number(key, value);
    else if (key == "dissipative.potential") dissipative_potential = value;
    else if (key == "dissipative.stiffness") dissipative_stiffness = parse_number(key, value);
    else if (key == "dissipative.table.x") table_x = parse_list(value);
    else if (key == "dissipative.table.u") table_u = parse_list(value);
    else if (key == "dissipative.table.wall") table_wall = parse_number(key, value);
    else if (key == "lane_emden.n") lane_emden_n = static_cast<int>(parse_integer(key, value));
    else if (key == "lane_emden.q0") lane_emden_q0 = parse_number(key, value);
    else throw ConfigError("unknown key '" + key + "'");
}

Scenario parse_scenario(std::istream& in) {
    Scenario s;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key = value", lineno));
        try {
            s.set(t.substr(0, eq), t.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("line {}: {}", lineno, e.what()));
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    return parse_scenario(in);
}

VariationField parse_family(const std::string& text, const PreparedScenario& ctx) {
    const std::size_t dim = ctx.system->dim;
    const std::string& sys = ctx.scenario.system;
    const auto parts = split(text, ':');
    const std::string head = parts.empty() ? std::string() : parts[0];
    auto want = [&](std::size_t n) {
        if (parts.size() != n + 1)
            throw ConfigError(fmt::format("family '{}': expected {} parameter(s) after '{}'", text, n, head));
    };
    auto lane_emden = [&](systems::LaneEmdenConstant which) {
        if (sys != "lane-emden") throw ConfigError("family '" + head + "' needs system lane-emden");
        want(0);
        return systems::lane_emden_family(systems::make_lane_emden(ctx.scenario.lane_emden_n), which);
    };

    if (head == "null") {
        want(0);
        return family_null(dim);
    }
    if (head == "time-shift-exp") {
        want(1);
        return family_time_shift_exp(dim, parse_number("family", parts[1]));
    }
    if (head == "time-shift-power") {
        want(2);
        return family_time_shift_power(dim, parse_number("family", parts[1]), parse_number("family", parts[2]));
    }
    if (head == "scaling") {
        want(2);
        auto alpha = parse_list(parts[1]);
        if (alpha.size() != dim)
            throw ConfigError(fmt::format("family '{}': {} scaling weights for a {}-dimensional system", text, alpha.size(), dim));
        return family_scaling(std::move(alpha), parse_number("family", parts[2]));
    }
    if (head == "le1") return lane_emden(systems::LaneEmdenConstant::first);
    if (head == "le2") return lane_emden(systems::LaneEmdenConstant::second);
    if (head == "le3") return lane_emden(systems::LaneEmdenConstant::third);
    if (head == "le-dyn") return lane_emden(systems::LaneEmdenConstant::dyn_sym);
    if (head == "mb-scaling") {
        if (sys != "maxwell-bloch") throw ConfigError("family 'mb-scaling' needs system maxwell-bloch");
        if (parts.size() > 2) throw ConfigError("family 'mb-scaling' takes at most one parameter");
        return systems::mb_scaling_family(parts.size() == 2 ? parse_number("family", parts[1]) : -2.0);
    }
    throw ConfigError("unknown family '" + text + "'");
}

PreparedScenario prepare(const Scenario& s) {
    PreparedScenario p{s, nullptr, State{}, family_null(1), {}};
    try {
        s.config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!std::isfinite(s.t_end)) throw ConfigError("t_end must be finite");
    if (s.t0 && !std::isfinite(*s.t0)) throw ConfigError("t0 must be finite");

    try {
        if (s.system == "dissipative") {
            systems::Potential U = systems::Potential::zero();
            if (s.dissipative_potential == "zero") U = systems::Potential::zero();
            else if (s.dissipative_potential == "quadratic") U = systems::Potential::quadratic(s.dissipative_stiffness);
            else if (s.dissipative_potential == "user-table") U = systems::Potential::table(s.table_x, s.table_u, s.table_wall);
            else throw ConfigError("dissipative.potential must be zero, quadratic or user-table");
            const auto d = systems::make_dissipative(s.dissipative_dim, s.dissipative_k, U);
            const std::size_t n = d.dim;
            p.system = d.system;
            p.init.t = s.t0.value_or(0.0);
            if (s.init.empty()) {
                p.init.q.assign(n, 1.0);
                p.init.qdot.assign(n, 0.0);
            } else if (s.init.size() == 2 * n) {
                p.init.q.assign(s.init.begin(), s.init.begin() + static_cast<long>(n));
                p.init.qdot.assign(s.init.begin() + static_cast<long>(n), s.init.end());
            } else {
                throw ConfigError(fmt::format("init needs {} values (q then qdot)", 2 * n));
            }
            p.locals = {{"energy", [d](const State& st) { return d.energy(st); }},
                        {"dissipative_energy", [d](const State& st) { return d.dissipative_energy(st); }}};
        } else if (s.system == "lane-emden") {
            if (s.t0 && !(*s.t0 > 0.0)) throw ConfigError("lane-emden needs t0 > 0 (the equation is singular at t = 0)");
            const auto le = systems::make_lane_emden(s.lane_emden_n);
            p.system = le.system;
            if (s.init.empty()) {
                if (!(s.lane_emden_q0 > 0.0)) throw ConfigError("lane_emden.q0 must be > 0 for the series start");
                p.init = lane_emden_series_start(le.n, s.lane_emden_q0, s.t0.value_or(1e-4));
            } else if (s.init.size() == 2) {
                p.init = State{s.t0.value_or(1.0), {s.init[0]}, {s.init[1]}};
            } else {
                throw ConfigError("init needs 2 values (q, qdot)");
            }
            if (!(s.t_end > 0.0)) throw ConfigError("lane-emden needs t_end > 0");
            p.locals = {{"energy", [le](const State& st) { return le.energy(st); }},
                        {"weighted_energy", [le](const State& st) { return le.weighted_energy(st); }}};
        } else if (s.system == "maxwell-bloch") {
            p.system = systems::make_maxwell_bloch().system;
            std::vector<double> x = s.init.empty() ? std::vector<double>{1.0, 1.0, 1.0, 1.0, -2.0} : s.init;
            if (x.size() != 5 && x.size() != 6) throw ConfigError("init needs 5 values x1,y1,x2,y2,z (optionally q3)");
            p.init = systems::mb_embed({x[0], x[1], x[2], x[3], x[4]}, x.size() == 6 ? x[5] : 0.0, s.t0.value_or(0.0));
            auto fi = [](const State& st) { return systems::mb_first_integrals(st); };
            p.locals = {{"E", [fi](const State& st) { return fi(st).E; }},
                        {"B", [fi](const State& st) { return fi(st).B; }},
                        {"J", [fi](const State& st) { return fi(st).J; }},
                        {"K", [fi](const State& st) { return fi(st).K; }}};
        } else {
            throw ConfigError("system must be dissipative, lane-emden or maxwell-bloch (got '" + s.system + "')");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    for (double v : p.init.q)
        if (!std::isfinite(v)) throw ConfigError("init values must be finite");
    for (double v : p.init.qdot)
        if (!std::isfinite(v)) throw ConfigError("init values must be finite");
    if (s.t_end == p.init.t) throw ConfigError("t_end equals the start time");
    p.family = parse_family(s.family, p);
    return p;
}

SimulationResult simulate(const PreparedScenario& p) {
    std::vector<VariationField> fams;
    if (!p.family.is_null()) fams.push_back(p.family);
    return SimulationResult{p, integrate(p.system, p.init, p.scenario.t_end, p.scenario.config, fams)};
}

std::vector<double> output_times(const SimulationResult& r) {
    const Trajectory& tr = r.trajectory;
    std::vector<double> t(tr.times().begin(), tr.times().end());
    const std::size_t n = r.prepared.scenario.samples;
    if (n > 0) {
        const double a = r.prepared.init.t, b = r.prepared.scenario.t_end;
        for (std::size_t i = 0; i <= n; ++i) {
            const double ti = i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
            if (tr.contains(ti)) t.push_back(ti);
        }
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

void write_trajectory_csv(std::ostream& out, const SimulationResult& r) {
    const Trajectory& tr = r.trajectory;
    const auto& locals = r.prepared.locals;
    const std::size_t n = tr.dim();
    std::string line = "t";
    for (std::size_t i = 1; i <= n; ++i) line += fmt::format(",q_{}", i);
    for (std::size_t i = 1; i <= n; ++i) line += fmt::format(",qdot_{}", i);
    line += ",N,I,C";
    for (const auto& c : locals) line += "," + c.name;
    out << line << '\n';

    const auto times = output_times(r);
    const auto series = nonlocal_constant(tr, r.prepared.family, tr.t_initial(), times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const State s = tr.state_at(times[k]);
        line = fmt_g17(s.t);
        for (double v : s.q) line += "," + fmt_g17(v);
        for (double v : s.qdot) line += "," + fmt_g17(v);
        line += "," + fmt_g17(series.boundary[k]) + "," + fmt_g17(series.integral[k]) + "," + fmt_g17(series.value[k]);
        for (const auto& c : locals) line += "," + fmt_g17(c.value(s));
        out << line << '\n';
    }
}

void write_levelset_csv(std::ostream& out, const std::vector<verify::LevelSetPolyline>& comps) {
    out << "u,v,component_id,in_stripe,accessible\n";
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (const auto& p : comps[c].vertices)
            out << fmt_g17(p.u) << ',' << fmt_g17(p.v) << ',' << c << ',' << (comps[c].inside_stripe ? 1 : 0) << ','
                << (comps[c].accessible() ? 1 : 0) << '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("no CSV column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("CSV is empty");
    t.header = split(line, ',');
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != t.header.size())
            throw std::runtime_error(fmt::format("CSV line {}: {} cells, header has {}", lineno, cells.size(), t.header.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            try {
                row.push_back(parse_number("csv", c));
            } catch (const ConfigError&) {
                throw std::runtime_error(fmt::format("CSV line {}: '{}' is not a number", lineno, c));
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace nlc
