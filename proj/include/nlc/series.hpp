#pragma once

#include <string>
#include <vector>

#include "nlc/trajectory.hpp"

namespace nlc {

/// A named scalar time series, e.g. a rearranged constant of motion.
struct Series {
    std::string name;
    double t0 = 0.0;
    std::vector<double> t;
    std::vector<double> value;
    IntegratorConfig config;
};

}  // namespace nlc
