#ifndef PREYPRED_FLOW_HPP
#define PREYPRED_FLOW_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "preypred/params.hpp"

namespace preypred {

/// Stable equilibrium of the predator flow at prey count n:
/// h*_n = max((rBn - D)/C, 0). Independent of epsilon.
inline double equilibrium(const ModelParams& p, std::int64_t n) {
    double a = p.growth(n);
    return a > 0.0 ? a / p.C : 0.0;
}

/// h*_0 .. h*_n_max as a lookup table (index = prey count).
inline std::vector<double> equilibrium_table(const ModelParams& p, std::int64_t n_max) {
    std::vector<double> table(static_cast<std::size_t>(n_max) + 1);
    for (std::int64_t n = 0; n <= n_max; ++n)
        table[static_cast<std::size_t>(n)] = equilibrium(p, n);
    return table;
}

namespace detail {

// Relative threshold under which rB n - D is treated as exactly zero; the
// logistic solution is then h/(1 + hC t).
inline bool growth_is_degenerate(const ModelParams& p, std::int64_t n, double a) {
    double scale = std::max({1.0, p.r * p.B * static_cast<double>(n), p.D});
    return std::abs(a) < 1e-12 * scale;
}

// phi(h, tau) for dH/dtau = H(a - C H) with a != 0, written so that no large
// positive argument is ever exponentiated.
inline double logistic_flow(double a, double C, double h, double tau) {
    if (a > 0.0) {
        double hstar = a / C;
        return hstar / (1.0 + (hstar / h - 1.0) * std::exp(-a * tau));
    }
    // a < 0: exp(a*tau) decays; all denominator terms are nonnegative.
    double e = std::exp(a * tau);
    return h * e / (1.0 + (h * C / -a) * (1.0 - e));
}

}  // namespace detail

/// Predator density after flowing for time t >= 0 at fixed prey count n,
/// i.e. phi^eps_n(h, t) = phi_n(h, t/eps). Exact closed form of the logistic
/// ODE dH/dt = H(rBn - D - CH)/eps. For h > 0 the value stays in
/// (0, max(h, h*_n)].
inline double flow(const ModelParams& p, std::int64_t n, double h, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("flow: t must be >= 0");
    if (!(h >= 0.0)) throw std::invalid_argument("flow: h must be >= 0");
    if (t == 0.0 || h == 0.0) return h;
    double a = p.growth(n);
    double tau = t / p.epsilon;
    if (detail::growth_is_degenerate(p, n, a)) return h / (1.0 + h * p.C * tau);
    return detail::logistic_flow(a, p.C, h, tau);
}

/// Time derivative of the flow at the point h (the vector field of the ODE):
/// h (rBn - D - C h)/eps.
inline double flow_derivative(const ModelParams& p, std::int64_t n, double h) {
    return h * (p.growth(n) - p.C * h) / p.epsilon;
}

/// Integral of the flow over [0, t]:
///   int_0^t phi^eps_n(h, s) ds = (eps/C) log(1 + (hC/a)(e^{a t/eps} - 1)),
/// a = rBn - D, with the limit (eps/C) log(1 + hC t/eps) when a = 0.
/// This is the predation part of the cumulative hazard.
inline double flow_integral(const ModelParams& p, std::int64_t n, double h, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("flow_integral: t must be >= 0");
    if (t == 0.0 || h == 0.0) return 0.0;
    double a = p.growth(n);
    double tau = t / p.epsilon;
    double scale = p.epsilon / p.C;
    if (detail::growth_is_degenerate(p, n, a)) return scale * std::log1p(h * p.C * tau);
    double x = a * tau;
    double ratio = h * p.C / a;  // = h/h*_n when a > 0
    if (x > 700.0) {
        // log(1 + ratio(e^x - 1)) = x + log(ratio + (1 - ratio)e^{-x})
        return scale * (x + std::log(ratio + (1.0 - ratio) * std::exp(-x)));
    }
    return scale * std::log1p(ratio * std::expm1(x));
}

/// Time for the flow at prey count n to move from density `from` to `to`.
/// Both must lie strictly on the same side of h*_n, ordered along the flow
/// direction. Used for exact bin-crossing times in occupation measures.
inline double flow_time_between(const ModelParams& p, std::int64_t n, double from, double to) {
    if (from == to) return 0.0;
    if (!(from > 0.0) || !(to > 0.0))
        throw std::invalid_argument("flow_time_between: densities must be > 0");
    double a = p.growth(n);
    if (detail::growth_is_degenerate(p, n, a)) {
        // h(t) = h/(1 + hC t/eps), decreasing
        double tau = (1.0 / to - 1.0 / from) / p.C;
        if (!(tau >= 0.0)) throw std::invalid_argument("flow_time_between: unreachable target");
        return tau * p.epsilon;
    }
    // 1/h(t) = C/a + (1/h0 - C/a) e^{-a t/eps}
    double u = 1.0 / from - p.C / a;
    double v = 1.0 / to - p.C / a;
    if (!(u * v > 0.0))
        throw std::invalid_argument("flow_time_between: endpoints straddle the equilibrium");
    double tau = std::log(u / v) / a;
    if (!(tau >= 0.0)) throw std::invalid_argument("flow_time_between: unreachable target");
    return tau * p.epsilon;
}

}  // namespace preypred

#endif
