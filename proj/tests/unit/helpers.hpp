#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nlc/system.hpp"

namespace testing {

inline constexpr std::uint64_t kSeed = 0;

/// Uniform draws on [lo, hi] from an explicitly seeded engine.
class Gen {
public:
    explicit Gen(std::uint64_t seed = kSeed) : rng_(seed) {}
    double uniform(double lo = -2.0, double hi = 2.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    nlc::Vec vec(std::size_t n, double lo = -2.0, double hi = 2.0) {
        nlc::Vec v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }
    nlc::State state(std::size_t n, double t) { return nlc::State{t, vec(n), vec(n)}; }

private:
    std::mt19937_64 rng_;
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace testing
