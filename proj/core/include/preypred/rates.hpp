#ifndef PREYPRED_RATES_HPP
#define PREYPRED_RATES_HPP

#include <cstdint>
#include <stdexcept>

#include "preypred/flow.hpp"
#include "preypred/params.hpp"

namespace preypred {

struct JumpRates {
    double birth = 0.0;
    double death = 0.0;
    double total() const { return birth + death; }
};

/// Prey jump rates at state s. Birth: bn + m. Death: n(d + cn + Bh), active
/// only for n >= 2 when m = 0 (the last prey individual cannot die), always
/// active when m > 0. The predator dynamics never contributes a jump.
inline JumpRates rates(const ModelParams& p, const State& s) {
    double n = static_cast<double>(s.n);
    JumpRates out;
    out.birth = p.b * n + p.m;
    if (p.death_active(s.n)) out.death = n * (p.d + p.c * n + p.B * s.h);
    return out;
}

/// Total prey jump rate at s; equals n(b + d + cn + Bh) for m = 0, n >= 2.
inline double total_rate(const ModelParams& p, const State& s) {
    return rates(p, s).total();
}

/// Cumulative hazard Theta(z, t): the total jump rate of `rates` integrated
/// along the predator flow started at z. The first-jump time from z has
/// survival function e^{-Theta(z, t)}. Closed form: the affine part
/// (bn + m + [death] n(d + cn)) t plus [death] nB int_0^t phi_n(h, s) ds.
inline double hazard(const ModelParams& p, const State& s, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("hazard: t must be >= 0");
    double n = static_cast<double>(s.n);
    double affine = p.b * n + p.m;
    double predation = 0.0;
    if (p.death_active(s.n)) {
        affine += n * (p.d + p.c * n);
        predation = n * p.B * flow_integral(p, s.n, s.h, t);
    }
    return affine * t + predation;
}

/// Unique t with hazard(p, s, t) = target, for target >= 0. Bracketed
/// Newton refinement to relative tolerance 1e-12; always terminates because
/// the rate is bounded below by bn + m > 0.
double invert_hazard(const ModelParams& p, const State& s, double target);

}  // namespace preypred

#endif
