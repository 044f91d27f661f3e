#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "nlc/trajectory.hpp"
#include "nlc/verify.hpp"

namespace nlc::suites {

struct SuiteOptions {
    /// Integrator settings for the drift criteria; the default is the
    /// reference setting (rtol 1e-9, atol 1e-12).
    IntegratorConfig config;
    std::uint64_t seed = 0;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// A shipped (system, family) pair: runs the scenario under a configuration and
/// returns the drift of the canonical constant and of its rearranged form.
struct DriftCase {
    std::string name;
    std::string system;  // dissipative | lane-emden | maxwell-bloch
    std::function<std::pair<verify::DriftReport, verify::DriftReport>(const IntegratorConfig&)> run;
};

std::vector<DriftCase> shipped_pairs();

/// Criteria exercised by a suite: dissipative, lane-emden, maxwell-bloch or all.
/// Throws std::invalid_argument for an unknown suite.
std::vector<int> criteria_for(std::string_view suite);

/// Runs one criterion (1..12). `system` restricts the multi-system criteria
/// (1 and 11) to one system; empty means all.
CriterionResult run_criterion(int id, const SuiteOptions& opt, std::string_view system = {});

std::vector<CriterionResult> run_suite(std::string_view suite, const SuiteOptions& opt);

}  // namespace nlc::suites
