#include "nlc/variation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace nlc {

namespace {

std::string num(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

}  // namespace

VariationField::VariationField(std::string label, std::size_t dim, JetFn delta_q, JetFn delta_qdot, Kind kind)
    : label_(std::move(label)), dim_(dim), dq_(std::move(delta_q)), dqdot_(std::move(delta_qdot)), kind_(kind) {
    if (!dq_ || !dqdot_) throw std::invalid_argument("variation field needs both jet components");
}

Vec VariationField::delta_q(const State& s, std::span<const double> qddot) const {
    Vec out(dim_);
    dq_(s, qddot, out);
    return out;
}

Vec VariationField::delta_qdot(const State& s, std::span<const double> qddot) const {
    Vec out(dim_);
    dqdot_(s, qddot, out);
    return out;
}

void VariationField::delta_q(const State& s, std::span<const double> qddot, std::span<double> out) const {
    dq_(s, qddot, out);
}

void VariationField::delta_qdot(const State& s, std::span<const double> qddot, std::span<double> out) const {
    dqdot_(s, qddot, out);
}

VariationField operator+(const VariationField& a, const VariationField& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("variation fields of different dimension");
    auto add = [](JetFn f, JetFn g, std::size_t n) {
        return [f = std::move(f), g = std::move(g), n](const State& s, std::span<const double> qdd,
                                                       std::span<double> out) {
            Vec tmp(n);
            f(s, qdd, out);
            g(s, qdd, tmp);
            for (std::size_t i = 0; i < n; ++i) out[i] += tmp[i];
        };
    };
    return VariationField("(" + a.label_ + ")+(" + b.label_ + ")", a.dim_, add(a.dq_, b.dq_, a.dim_),
                          add(a.dqdot_, b.dqdot_, a.dim_), VariationField::Kind::sum);
}

VariationField family_null(std::size_t dim) {
    auto zero = [](const State&, std::span<const double>, std::span<double> out) {
        for (double& x : out) x = 0.0;
    };
    return VariationField("null", dim, zero, zero, VariationField::Kind::null);
}

VariationField family_time_shift(std::size_t dim, std::function<double(double)> g,
                                 std::function<double(double)> g_prime, std::string label) {
    auto dq = [g](const State& s, std::span<const double>, std::span<double> out) {
        const double gt = g(s.t);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = gt * s.qdot[i];
    };
    auto dqdot = [g, g_prime](const State& s, std::span<const double> qdd, std::span<double> out) {
        const double gt = g(s.t);
        const double gp = g_prime(s.t);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = gp * s.qdot[i] + gt * qdd[i];
    };
    return VariationField(std::move(label), dim, dq, dqdot, VariationField::Kind::time_shift);
}

VariationField family_time_shift_exp(std::size_t dim, double a) {
    return family_time_shift(
        dim, [a](double t) { return std::exp(a * t); }, [a](double t) { return a * std::exp(a * t); },
        "time_shift_exp(a=" + num(a) + ")");
}

VariationField family_time_shift_power(std::size_t dim, double c, double p) {
    return family_time_shift(
        dim, [c, p](double t) { return c * std::pow(t, p); },
        [c, p](double t) { return p == 0.0 ? 0.0 : c * p * std::pow(t, p - 1.0); },
        "time_shift_power(c=" + num(c) + ",p=" + num(p) + ")");
}

VariationField family_scaling(std::vector<double> alpha, double beta) {
    std::string label = "scaling(alpha=[";
    for (std::size_t i = 0; i < alpha.size(); ++i) label += (i ? "," : "") + num(alpha[i]);
    label += "],beta=" + num(beta) + ")";
    const std::size_t n = alpha.size();
    auto dq = [alpha, beta](const State& s, std::span<const double>, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha[i] * s.q[i] + beta * s.t * s.qdot[i];
    };
    auto dqdot = [alpha, beta](const State& s, std::span<const double> qdd, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = alpha[i] * s.qdot[i] + beta * (s.qdot[i] + s.t * qdd[i]);
    };
    const bool null = beta == 0.0 && std::all_of(alpha.begin(), alpha.end(), [](double a) { return a == 0.0; });
    return VariationField(null ? "null" : label, n, dq, dqdot,
                          null ? VariationField::Kind::null : VariationField::Kind::scaling);
}

}  // namespace nlc
