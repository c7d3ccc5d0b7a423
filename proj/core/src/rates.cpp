#include "preypred/rates.hpp"

#include <algorithm>
#include <cmath>

namespace preypred {

double invert_hazard(const ModelParams& p, const State& s, double target) {
    if (!(target >= 0.0)) throw std::invalid_argument("invert_hazard: target must be >= 0");
    if (target == 0.0) return 0.0;

    if (!(p.b * static_cast<double>(s.n) + p.m > 0.0))
        throw std::invalid_argument("invert_hazard: zero jump rate, no finite inverse");

    // The rate along the flow stays between its values at min(h, h*_n) and
    // max(h, h*_n), so the hazard is bracketed by two affine functions.
    double hstar = equilibrium(p, s.n);
    double rate_top = total_rate(p, State{s.n, std::max(s.h, hstar)});
    double rate_bottom = total_rate(p, State{s.n, std::min(s.h, hstar)});
    double lo = target / rate_top;    // hazard(lo) <= target
    double hi = target / rate_bottom; // hazard(hi) >= target

    double t = std::clamp(target / total_rate(p, s), lo, hi);
    for (int iter = 0; iter < 200; ++iter) {
        double f = hazard(p, s, t) - target;
        if (f > 0.0)
            hi = std::min(hi, t);
        else
            lo = std::max(lo, t);
        double rate_t = total_rate(p, State{s.n, flow(p, s.n, s.h, t)});
        double step = f / rate_t;
        double t_next = t - step;
        if (!(t_next > lo && t_next < hi)) t_next = 0.5 * (lo + hi);
        if (std::abs(t_next - t) <= 1e-12 * std::max(t_next, 1e-300) || hi - lo <= 1e-12 * hi) {
            t = t_next;
            break;
        }
        t = t_next;
    }
    return t;
}

}  // namespace preypred
