#ifndef PREYPRED_PARAMS_HPP
#define PREYPRED_PARAMS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace preypred {

/// Demographic rates of the prey-predator community.
///
/// Prey: per-capita birth rate b, death rate d, logistic competition c,
/// predation pressure B per unit predator density. Predators: conversion
/// efficiency r, death rate D, competition C. Optional prey migration m and
/// the slow-fast ratio epsilon, which rescales the predator dynamics as
/// r/epsilon, D/epsilon, C/epsilon.
struct ModelParams {
    double b = 0.0;        ///< prey per-capita birth rate (1/time), > 0
    double d = 0.0;        ///< prey per-capita death rate (1/time), >= 0
    double c = 0.0;        ///< prey logistic competition (1/(time*count)), > 0
    double B = 0.0;        ///< predation intensity (1/(time*density)), >= 0
    double r = 0.0;        ///< conversion efficiency, > 0
    double D = 0.0;        ///< predator death rate (1/time), >= 0
    double C = 0.0;        ///< predator competition (1/(time*density)), > 0
    double m = 0.0;        ///< prey migration rate (1/time), >= 0
    double epsilon = 1.0;  ///< time-scale ratio, in (0, 1]

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    /// Net predator growth rate at prey count n, unscaled: rB*n - D.
    double growth(std::int64_t n) const { return r * B * static_cast<double>(n) - D; }

    /// Effective (epsilon-scaled) net growth rate: (rB*n - D)/epsilon.
    double growth_eff(std::int64_t n) const { return growth(n) / epsilon; }

    /// Effective predator competition: C/epsilon.
    double comp_eff() const { return C / epsilon; }

    /// True when the prey death term is active at prey count n.
    /// With m = 0 the single remaining prey individual cannot die.
    bool death_active(std::int64_t n) const { return m > 0.0 || n >= 2; }
};

/// A point of the hybrid state space: prey count and predator density.
struct State {
    std::int64_t n = 0;  ///< prey count; >= 1 when m = 0
    double h = 0.0;      ///< predator density, >= 0

    friend bool operator==(const State&, const State&) = default;
};

/// Validates a state against the parameter regime.
/// Throws std::invalid_argument on violation.
void validate_state(const ModelParams& p, const State& s);

inline void ModelParams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (!(b > 0.0)) fail("ModelParams: b must be > 0");
    if (!(d >= 0.0)) fail("ModelParams: d must be >= 0");
    if (!(c > 0.0)) fail("ModelParams: c must be > 0");
    if (!(B >= 0.0)) fail("ModelParams: B must be >= 0");
    if (!(r > 0.0)) fail("ModelParams: r must be > 0");
    if (!(D >= 0.0)) fail("ModelParams: D must be >= 0");
    if (!(C > 0.0)) fail("ModelParams: C must be > 0");
    if (!(m >= 0.0)) fail("ModelParams: m must be >= 0");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) fail("ModelParams: epsilon must be in (0, 1]");
}

inline void validate_state(const ModelParams& p, const State& s) {
    if (s.n < 0) throw std::invalid_argument("State: prey count must be >= 0");
    if (p.m == 0.0 && s.n < 1)
        throw std::invalid_argument("State: prey count must be >= 1 when m = 0");
    if (!(s.h >= 0.0)) throw std::invalid_argument("State: predator density must be >= 0");
}

}  // namespace preypred

#endif
