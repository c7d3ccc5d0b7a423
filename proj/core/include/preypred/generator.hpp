#ifndef PREYPRED_GENERATOR_HPP
#define PREYPRED_GENERATOR_HPP

#include <cstdint>

#include "preypred/rates.hpp"

namespace preypred {

/// Lyapunov candidates for the drift inequality A f <= -gamma f + delta 1_K.
/// V(n,h) = n + h/r (>= 1 on the state space), W(n,h) = n^2 + h.
enum class Lyapunov { V, W };

inline double lyapunov_value(Lyapunov which, const ModelParams& p, const State& s) {
    double n = static_cast<double>(s.n);
    return which == Lyapunov::V ? n + s.h / p.r : n * n + s.h;
}

/// Applies the extended generator of the community process to the Lyapunov
/// function at s: the flow term h(rBn - D - Ch) d_h f / eps plus the birth
/// and death jump differences weighted by `rates`.
inline double generator_apply(Lyapunov which, const ModelParams& p, const State& s) {
    double n = static_cast<double>(s.n);
    JumpRates jr = rates(p, s);
    double flow_term = flow_derivative(p, s.n, s.h);
    if (which == Lyapunov::V) {
        // d_h V = 1/r, jump differences +-1
        return flow_term / p.r + jr.birth - jr.death;
    }
    // d_h W = 1, jump differences 2n+1 and -(2n-1)
    return flow_term + (2.0 * n + 1.0) * jr.birth - (2.0 * n - 1.0) * jr.death;
}

}  // namespace preypred

#endif
