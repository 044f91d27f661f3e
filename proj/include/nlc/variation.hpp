#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nlc/system.hpp"

namespace nlc {

/// Writes one component of a variation jet (delta q or delta qdot) at a state.
/// `qddot` is the acceleration at that state.
using JetFn = std::function<void(const State& s, std::span<const double> qddot, std::span<double> out)>;

/// First-order jet (delta q, delta qdot) of a one-parameter family of
/// perturbed motions, evaluated pointwise along a base trajectory.
class VariationField {
public:
    enum class Kind { null, time_shift, scaling, raw, sum };

    VariationField(std::string label, std::size_t dim, JetFn delta_q, JetFn delta_qdot, Kind kind = Kind::raw);

    const std::string& label() const { return label_; }
    std::size_t dim() const { return dim_; }
    Kind kind() const { return kind_; }
    bool is_null() const { return kind_ == Kind::null; }

    Vec delta_q(const State& s, std::span<const double> qddot) const;
    Vec delta_qdot(const State& s, std::span<const double> qddot) const;
    void delta_q(const State& s, std::span<const double> qddot, std::span<double> out) const;
    void delta_qdot(const State& s, std::span<const double> qddot, std::span<double> out) const;

    friend VariationField operator+(const VariationField& a, const VariationField& b);

private:
    std::string label_;
    std::size_t dim_;
    JetFn dq_;
    JetFn dqdot_;
    Kind kind_;
};

/// delta q == 0.
VariationField family_null(std::size_t dim);

/// q(t + lambda g(t)): delta q = g qdot, delta qdot = g' qdot + g qddot.
VariationField family_time_shift(std::size_t dim, std::function<double(double)> g,
                                 std::function<double(double)> g_prime, std::string label);

/// g(t) = exp(a t).
VariationField family_time_shift_exp(std::size_t dim, double a);

/// g(t) = c t^p; intended for t > 0 unless p is a nonnegative integer.
VariationField family_time_shift_power(std::size_t dim, double c, double p);

/// diag(exp(alpha lambda)) q(exp(beta lambda) t):
/// delta q_i = alpha_i q_i + beta t qdot_i.
VariationField family_scaling(std::vector<double> alpha, double beta);

}  // namespace nlc
