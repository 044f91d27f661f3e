#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlc/integrate.hpp"
#include "nlc/levelset.hpp"
#include "nlc/trajectory.hpp"
#include "nlc/variation.hpp"

namespace nlc {

/// Bad scenario text, unknown key, or parameters outside a system's schema.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One simulation run, read from flat `key = value` text with dotted keys.
///
///   system                  dissipative | lane-emden | maxwell-bloch
///   family                  null | time-shift-exp:A | time-shift-power:C:P |
///                           scaling:A1,..,An:B | le1 | le2 | le3 | le-dyn | mb-scaling[:A]
///   init                    comma list: q then qdot (dissipative, lane-emden);
///                           x1,y1,x2,y2,z[,q3] for maxwell-bloch
///   t0, t_end               start and end time
///   rtol, atol, h_max, max_steps, blowup_norm
///   samples                 uniform output grid intervals over [t0, t_end] (0: nodes only)
///   out                     CSV path ("-" or empty: stdout)
///   seed
///   dissipative.dim, dissipative.k, dissipative.potential (zero | quadratic | user-table),
///   dissipative.stiffness, dissipative.table.x, dissipative.table.u, dissipative.table.wall
///   lane_emden.n, lane_emden.q0   series start q(0) = q0 at t0 (default 1e-4) when init is absent
///
/// Lines starting with '#' and blank lines are ignored.
struct Scenario {
    std::string system = "maxwell-bloch";
    std::string family = "null";
    std::vector<double> init;
    std::optional<double> t0;
    double t_end = 10.0;
    IntegratorConfig config;
    std::size_t samples = 0;
    std::string out;
    std::uint64_t seed = 0;

    std::size_t dissipative_dim = 1;
    double dissipative_k = 0.5;
    std::string dissipative_potential = "quadratic";
    double dissipative_stiffness = 1.0;
    std::vector<double> table_x, table_u;
    double table_wall = 1.0;

    int lane_emden_n = 5;
    double lane_emden_q0 = 1.0;

    /// Sets one key; throws ConfigError for unknown keys or unparsable values.
    void set(const std::string& key, const std::string& value);
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

/// Parses a comma-separated list of numbers; throws ConfigError.
std::vector<double> parse_list(const std::string& text);

/// A state-only quantity written as its own CSV column.
struct LocalColumn {
    std::string name;
    std::function<double(const State&)> value;
};

/// Everything needed to run a scenario: checked system, start state, family, columns.
struct PreparedScenario {
    Scenario scenario;
    SystemPtr system;
    State init;
    VariationField family;
    std::vector<LocalColumn> locals;
};

/// Validates the scenario against its system's schema; throws ConfigError.
/// Lane-Emden rejects t0 <= 0.
PreparedScenario prepare(const Scenario& s);

/// Builds a family from its text form for a given system.
VariationField parse_family(const std::string& text, const PreparedScenario& context);

struct SimulationResult {
    PreparedScenario prepared;
    Trajectory trajectory;
};

/// Integrates the prepared scenario. Blow-up and step failures end the
/// trajectory early; the termination reason says why.
SimulationResult simulate(const PreparedScenario& p);

/// Output times: accepted steps merged with the uniform grid, restricted to the span.
std::vector<double> output_times(const SimulationResult& r);

/// Trajectory CSV: t, q_i, qdot_i, N, I, C, then the local columns.
/// Floats at 17 significant digits; rows in increasing t.
void write_trajectory_csv(std::ostream& out, const SimulationResult& r);

/// Level-set CSV: u, v, component_id, in_stripe, accessible (header always present).
void write_levelset_csv(std::ostream& out, const std::vector<verify::LevelSetPolyline>& comps);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

/// Reads a numeric CSV with a header row; throws std::runtime_error on malformed input.
CsvTable read_csv(std::istream& in);

}  // namespace nlc
