#include "preypred/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace preypred {

namespace {

// mu_{n+1}/mu_n of the averaged invariant recursion.
double invariant_ratio(const ModelParams& p, std::int64_t n) {
    double nd = static_cast<double>(n);
    double np1 = nd + 1.0;
    return p.b * nd / (np1 * (p.d + p.c * np1 + p.B * equilibrium(p, n + 1)));
}

struct LinFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinFit least_squares(std::span<const double> x, std::span<const double> y) {
    double n = static_cast<double>(x.size());
    double sx = std::accumulate(x.begin(), x.end(), 0.0);
    double sy = std::accumulate(y.begin(), y.end(), 0.0);
    double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return fit;
}

}  // namespace

double tv_distance(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    if (a.support_start != b.support_start || a.p.size() != b.p.size())
        throw std::invalid_argument("tv_distance: distributions have different supports");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.p.size(); ++i) acc += std::abs(a.p[i] - b.p[i]);
    return 0.5 * acc;
}

double Hist2D::total_weight() const { return std::accumulate(w.begin(), w.end(), 0.0); }

double OccupationMeasure::total_weight() const {
    return std::accumulate(w.begin(), w.end(), 0.0);
}

Hist2D make_hstar_hist(const ModelParams& p, std::int64_t n_lo, std::int64_t n_hi) {
    if (n_hi < n_lo) throw std::invalid_argument("make_hstar_hist: n_hi must be >= n_lo");
    Hist2D hist;
    hist.n_lo = n_lo;
    hist.n_hi = n_hi;
    double prev = equilibrium(p, std::max<std::int64_t>(n_lo, 1));
    for (std::int64_t n = std::max<std::int64_t>(n_lo, 1) + 1; n <= n_hi; ++n) {
        double cur = equilibrium(p, n);
        if (cur > prev) hist.h_edges.push_back(0.5 * (prev + cur));
        prev = cur;
    }
    hist.w.assign(hist.n_rows() * hist.n_cols(), 0.0);
    return hist;
}

double tv_distance(const Hist2D& a, const Hist2D& b) {
    if (a.n_lo != b.n_lo || a.n_hi != b.n_hi || a.h_edges != b.h_edges)
        throw std::invalid_argument("tv_distance: histograms have different bin structure");
    double wa = a.total_weight(), wb = b.total_weight();
    if (!(wa > 0.0) || !(wb > 0.0))
        throw std::invalid_argument("tv_distance: empty histogram");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.w.size(); ++i) acc += std::abs(a.w[i] / wa - b.w[i] / wb);
    return 0.5 * acc;
}

DiscreteDistribution averaged_invariant(const ModelParams& p, std::int64_t n_max) {
    p.validate();
    if (p.m != 0.0)
        throw std::invalid_argument("averaged_invariant: migration (m > 0) is not supported");
    if (n_max < 2) throw std::invalid_argument("averaged_invariant: n_max must be >= 2");

    std::vector<double> logw(static_cast<std::size_t>(n_max));
    logw[0] = 0.0;
    for (std::int64_t n = 1; n < n_max; ++n)
        logw[static_cast<std::size_t>(n)] =
            logw[static_cast<std::size_t>(n - 1)] + std::log(invariant_ratio(p, n));

    double lmax = *std::max_element(logw.begin(), logw.end());
    double sum = 0.0;
    for (double lw : logw) sum += std::exp(lw - lmax);
    double log_norm = lmax + std::log(sum);

    DiscreteDistribution dist;
    dist.support_start = 1;
    dist.p.resize(logw.size());
    for (std::size_t i = 0; i < logw.size(); ++i) dist.p[i] = std::exp(logw[i] - log_norm);

    double rho = invariant_ratio(p, n_max);
    if (rho < 1.0) {
        dist.tail_mass = dist.p.back() * rho / (1.0 - rho);
    } else {
        dist.truncation_warning = true;
        dist.tail_mass = 1.0;  // geometric bound unavailable; mode lies beyond n_max
    }
    return dist;
}

ModeReport invariant_mode(const ModelParams& p, std::int64_t n_max) {
    p.validate();
    if (p.m != 0.0)
        throw std::invalid_argument("invariant_mode: migration (m > 0) is not supported");
    if (n_max < 2) throw std::invalid_argument("invariant_mode: n_max must be >= 2");

    ModeReport report;
    double logw = 0.0, best = 0.0;
    report.mode = 1;
    for (std::int64_t n = 1; n < n_max; ++n) {
        logw += std::log(invariant_ratio(p, n));
        if (logw > best) {
            best = logw;
            report.mode = n + 1;
        }
    }
    auto near_one = [&](std::int64_t n) {
        return n >= 1 && n < n_max && std::abs(invariant_ratio(p, n) - 1.0) <= 1e-12;
    };
    report.tie = near_one(report.mode) || near_one(report.mode - 1);

    PolyDiag& poly = report.poly;
    double q = p.r * p.B * p.B / p.C;
    double s = p.B * p.D / p.C;
    poly.alpha = p.c + q;
    poly.beta = p.d + 2.0 * p.c + 2.0 * q - s;
    poly.gamma = -p.b + p.d + p.c + q - s;
    poly.discriminant = poly.beta * poly.beta - 4.0 * poly.alpha * poly.gamma;
    double root = std::sqrt(poly.discriminant);
    poly.x0 = (-poly.beta - root) / (2.0 * poly.alpha);
    poly.x1 = (-poly.beta + root) / (2.0 * poly.alpha);
    report.poly_mode =
        poly.x1 > 1.0 ? static_cast<std::int64_t>(std::ceil(poly.x1 - 1e-9)) : 1;
    report.discrepancy = report.poly_mode != report.mode;
    return report;
}

Hist2D empirical_invariant(std::span<const State> terminal, const Hist2D& skeleton) {
    if (terminal.empty()) throw std::invalid_argument("empirical_invariant: empty sample");
    Hist2D hist = skeleton;
    std::fill(hist.w.begin(), hist.w.end(), 0.0);
    for (const State& s : terminal) hist.add(s);
    return hist;
}

DiscreteDistribution prey_marginal(std::span<const State> sample, std::int64_t support_start,
                                   std::int64_t n_max) {
    if (sample.empty()) throw std::invalid_argument("prey_marginal: empty sample");
    if (n_max < support_start)
        throw std::invalid_argument("prey_marginal: n_max must be >= support_start");
    DiscreteDistribution dist;
    dist.support_start = support_start;
    dist.p.assign(static_cast<std::size_t>(n_max - support_start + 1), 0.0);
    double unit = 1.0 / static_cast<double>(sample.size());
    for (const State& s : sample) {
        std::int64_t n = std::clamp(s.n, support_start, n_max);
        dist.p[static_cast<std::size_t>(n - support_start)] += unit;
    }
    return dist;
}

namespace {

// Visits maximal constant-prey segments of the trajectory clipped to
// [w0, w1]. fn(a, b, seg, t_origin): on [a, b) the state is
// (seg.n, flow(seg.h, s - t_origin)) for the PDMP, constant seg otherwise.
template <class F>
void for_each_segment(const Trajectory& traj, double w0, double w1, F&& fn) {
    State cur = traj.initial;
    double t0 = 0.0;
    bool reached_end = false;
    for (const Event& ev : traj.events) {
        double te = ev.kind == EventKind::end ? traj.horizon : ev.time;
        double a = std::max(t0, w0), b = std::min(te, w1);
        if (a < b) fn(a, b, cur, t0);
        if (ev.kind == EventKind::end) {
            reached_end = true;
            break;
        }
        cur = ev.after;
        t0 = ev.time;
        if (t0 >= w1) {
            reached_end = true;
            break;
        }
    }
    if (!reached_end) {
        double a = std::max(t0, w0), b = std::min(traj.horizon, w1);
        if (a < b) fn(a, b, cur, t0);
    }
}

}  // namespace

OccupationMeasure occupation_measure(const Trajectory& traj, double w0, double w1,
                                     std::span<const double> interior_edges) {
    if (!(w0 >= 0.0 && w0 <= w1 && w1 <= traj.horizon))
        throw std::invalid_argument("occupation_measure: window outside [0, T]");
    if (!std::is_sorted(interior_edges.begin(), interior_edges.end()))
        throw std::invalid_argument("occupation_measure: edges must be sorted");

    OccupationMeasure om;
    om.t0 = w0;
    om.t1 = w1;
    om.h_edges.assign(interior_edges.begin(), interior_edges.end());
    om.w.assign(interior_edges.size() + 1, 0.0);

    auto bin = [&](double h) {
        return static_cast<std::size_t>(
            std::upper_bound(om.h_edges.begin(), om.h_edges.end(), h) - om.h_edges.begin());
    };
    const ModelParams& p = traj.params;
    const bool pdmp = traj.tag.kind == ProcessKind::pdmp;

    for_each_segment(traj, w0, w1, [&](double a, double b, const State& seg, double t_origin) {
        if (!pdmp || seg.h == 0.0) {
            om.w[bin(seg.h)] += b - a;
            return;
        }
        double h_a = flow(p, seg.n, seg.h, a - t_origin);
        double h_b = flow(p, seg.n, seg.h, b - t_origin);
        std::size_t ia = bin(h_a), ib = bin(h_b);
        if (ia == ib) {
            om.w[ia] += b - a;
            return;
        }
        double cur_t = a;
        if (ib > ia) {
            for (std::size_t j = ia; j < ib; ++j) {
                double tc = t_origin + flow_time_between(p, seg.n, seg.h, om.h_edges[j]);
                tc = std::clamp(tc, cur_t, b);
                om.w[j] += tc - cur_t;
                cur_t = tc;
            }
        } else {
            for (std::size_t j = ia; j > ib; --j) {
                double tc = t_origin + flow_time_between(p, seg.n, seg.h, om.h_edges[j - 1]);
                tc = std::clamp(tc, cur_t, b);
                om.w[j] += tc - cur_t;
                cur_t = tc;
            }
        }
        om.w[ib] += b - cur_t;
    });
    return om;
}

double time_near_equilibrium(const Trajectory& traj, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("time_near_equilibrium: tol must be > 0");
    const ModelParams& p = traj.params;
    const bool pdmp = traj.tag.kind == ProcessKind::pdmp;
    double total = 0.0;
    for_each_segment(traj, 0.0, traj.horizon,
                     [&](double a, double b, const State& seg, double t_origin) {
                         double hstar = equilibrium(p, seg.n);
                         double lo = hstar - tol, hi = hstar + tol;
                         if (!pdmp) {
                             if (seg.h >= lo && seg.h <= hi) total += b - a;
                             return;
                         }
                         double h_a = flow(p, seg.n, seg.h, a - t_origin);
                         if (h_a >= lo && h_a <= hi) {
                             total += b - a;  // the flow never leaves the band around h*_n
                             return;
                         }
                         double h_b = flow(p, seg.n, seg.h, b - t_origin);
                         double edge = h_a > hi ? hi : lo;
                         bool entered = h_a > hi ? h_b <= hi : h_b >= lo;
                         if (!entered) return;
                         double t_enter =
                             t_origin + flow_time_between(p, seg.n, seg.h, edge);
                         t_enter = std::clamp(t_enter, a, b);
                         total += b - t_enter;
                     });
    return total;
}

DriftReport drift_check(const ModelParams& p, Lyapunov which, double gamma,
                        const DriftGrid& grid) {
    p.validate();
    if (!(gamma > 0.0)) throw std::invalid_argument("drift_check: gamma must be > 0");
    if (grid.n_max < 2 || !(grid.h_max > 0.0) || grid.h_steps < 2)
        throw std::invalid_argument("drift_check: degenerate grid");

    const std::int64_t n_start = p.m > 0.0 ? 0 : 1;
    const std::size_t rows = static_cast<std::size_t>(grid.n_max - n_start + 1);
    const std::size_t cols = static_cast<std::size_t>(grid.h_steps + 1);
    const double dh = grid.h_max / static_cast<double>(grid.h_steps);

    std::vector<double> margin(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::int64_t n = n_start + static_cast<std::int64_t>(i);
        for (std::size_t j = 0; j < cols; ++j) {
            State s{n, static_cast<double>(j) * dh};
            margin[i * cols + j] =
                generator_apply(which, p, s) + gamma * lyapunov_value(which, p, s);
        }
    }

    DriftReport report;
    report.which = which;
    report.gamma = gamma;
    report.grid = grid;

    std::int64_t k_n = n_start;
    double k_h = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (margin[i * cols + j] > 0.0) {
                k_n = std::max(k_n, n_start + static_cast<std::int64_t>(i));
                k_h = std::max(k_h, static_cast<double>(j) * dh);
            }
    report.K_n = k_n;
    report.K_h = k_h;

    double delta = 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
        std::int64_t n = n_start + static_cast<std::int64_t>(i);
        for (std::size_t j = 0; j < cols; ++j) {
            double h = static_cast<double>(j) * dh;
            double g = margin[i * cols + j];
            if (n <= k_n && h <= k_h)
                delta = std::max(delta, g);
            else
                worst = std::max(worst, g);
        }
    }
    if (!std::isfinite(worst)) {
        // the box fills the grid: report the boundary shell instead
        worst = margin[rows * cols - 1];
        for (std::size_t j = 0; j < cols; ++j)
            worst = std::max(worst, margin[(rows - 1) * cols + j]);
        for (std::size_t i = 0; i < rows; ++i)
            worst = std::max(worst, margin[i * cols + (cols - 1)]);
    }
    report.delta = std::max(delta, 0.0);
    report.worst_margin = worst;

    // Tail dominance: margins keep worsening across the outermost grid shells.
    bool tail_ok = true;
    for (std::size_t j = 0; j < cols && tail_ok; ++j)
        tail_ok = margin[(rows - 1) * cols + j] < 0.0 &&
                  margin[(rows - 1) * cols + j] <= margin[(rows - 2) * cols + j];
    for (std::size_t i = 0; i < rows && tail_ok; ++i)
        tail_ok = margin[i * cols + (cols - 1)] < 0.0 &&
                  margin[i * cols + (cols - 1)] <= margin[i * cols + (cols - 2)];
    report.tail_ok = tail_ok;

    report.valid = tail_ok && k_n < grid.n_max && k_h < grid.h_max;
    if (!report.valid) {
        for (std::size_t i = 0; i < rows && report.offenders.size() < 16; ++i)
            for (std::size_t j = 0; j < cols && report.offenders.size() < 16; ++j) {
                bool boundary = i == rows - 1 || j == cols - 1;
                if (boundary && margin[i * cols + j] >= 0.0)
                    report.offenders.push_back(
                        State{n_start + static_cast<std::int64_t>(i),
                              static_cast<double>(j) * dh});
            }
    }
    return report;
}

DecayReport ergodicity_decay(const ModelParams& p, const State& z_a, const State& z_b,
                             std::span<const double> times, int replicas, std::uint64_t seed,
                             std::int64_t n_top) {
    p.validate();
    validate_state(p, z_a);
    validate_state(p, z_b);
    if (times.empty() || !std::is_sorted(times.begin(), times.end()) || !(times.front() > 0.0))
        throw std::invalid_argument("ergodicity_decay: times must be sorted and > 0");
    if (replicas < 4) throw std::invalid_argument("ergodicity_decay: needs at least 4 replicas");
    if (p.growth(1) > 0.0) {
        double hstar1 = equilibrium(p, 1);
        if (!(z_a.h > hstar1) || !(z_b.h > hstar1))
            throw std::invalid_argument(
                "ergodicity_decay: initial states must lie in E' (h > h*_1) when rB - D > 0");
    }

    ReplicaSpec spec{p, ProcessTag{ProcessKind::pdmp, 0}, z_a.n, z_a.h, 0, times.back(), {}};
    auto snaps_a = run_replicas_snapshots(spec, times, replicas, seed, 0);
    spec.n0 = z_b.n;
    spec.h0 = z_b.h;
    auto snaps_b =
        run_replicas_snapshots(spec, times, replicas, seed, static_cast<std::uint64_t>(replicas));

    Hist2D skeleton = make_hstar_hist(p, p.m > 0.0 ? 0 : 1, n_top);
    DecayReport report;
    double floor = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        Hist2D ha = skeleton, hb = skeleton, ha_even = skeleton, ha_odd = skeleton;
        for (int i = 0; i < replicas; ++i) {
            const State& sa = snaps_a[static_cast<std::size_t>(i)][k];
            ha.add(sa);
            (i % 2 == 0 ? ha_even : ha_odd).add(sa);
            hb.add(snaps_b[static_cast<std::size_t>(i)][k]);
        }
        report.points.push_back(DecayPoint{times[k], tv_distance(ha, hb)});
        floor = std::max(floor, tv_distance(ha_even, ha_odd) / std::sqrt(2.0));
    }
    report.noise_floor = floor;

    std::vector<double> xs, ys;
    for (const DecayPoint& pt : report.points)
        if (pt.tv > 2.0 * floor) {
            xs.push_back(pt.t);
            ys.push_back(std::log(pt.tv));
        }
    report.points_used = static_cast<int>(xs.size());
    report.conclusive = xs.size() >= 2;
    if (report.conclusive) {
        LinFit fit = least_squares(xs, ys);
        report.slope = fit.slope;
        report.intercept = fit.intercept;
        report.r2 = fit.r2;
    }
    return report;
}

ReachReport reachability(const ModelParams& p, const State& z0, std::int64_t target_n,
                         double h_lo, double h_hi, double T, int replicas, std::uint64_t seed) {
    p.validate();
    validate_state(p, z0);
    if (!(h_lo < h_hi)) throw std::invalid_argument("reachability: need h_lo < h_hi");
    if (target_n < (p.m > 0.0 ? 0 : 1))
        throw std::invalid_argument("reachability: target prey count outside state space");
    if (!(T > 0.0)) throw std::invalid_argument("reachability: T must be > 0");
    if (replicas < 1) throw std::invalid_argument("reachability: replicas must be >= 1");

    ReplicaSpec spec{p, ProcessTag{ProcessKind::pdmp, 0}, z0.n, z0.h, 0, T, {}};
    auto terminal = run_replicas_terminal(spec, replicas, seed);
    ReachReport report;
    report.replicas = replicas;
    for (const State& s : terminal)
        if (s.n == target_n && s.h > h_lo && s.h < h_hi) ++report.hits;
    report.frequency = static_cast<double>(report.hits) / static_cast<double>(replicas);
    return report;
}

EpsTable epsilon_convergence_suite(const ModelParams& p, std::span<const double> epsilons,
                                   const State& z0, double T, int replicas, std::uint64_t seed,
                                   std::int64_t n_top) {
    p.validate();
    validate_state(p, z0);
    if (epsilons.empty()) throw std::invalid_argument("epsilon_convergence_suite: no epsilons");
    for (double e : epsilons)
        if (!(e > 0.0 && e <= 1.0))
            throw std::invalid_argument("epsilon_convergence_suite: epsilon must be in (0, 1]");
    if (!(T > 0.0)) throw std::invalid_argument("epsilon_convergence_suite: T must be > 0");
    if (replicas < 4)
        throw std::invalid_argument("epsilon_convergence_suite: needs at least 4 replicas");

    const std::int64_t start = p.m > 0.0 ? 0 : 1;
    ReplicaSpec avg_spec{p, ProcessTag{ProcessKind::averaged, 0}, z0.n, 0.0, 0, T, {}};
    auto ref = run_replicas_terminal(avg_spec, replicas, seed, 0);
    DiscreteDistribution ref_marginal = prey_marginal(ref, start, n_top);

    std::vector<State> ref_even, ref_odd;
    for (int i = 0; i < replicas; ++i)
        (i % 2 == 0 ? ref_even : ref_odd).push_back(ref[static_cast<std::size_t>(i)]);
    double floor = tv_distance(prey_marginal(ref_even, start, n_top),
                               prey_marginal(ref_odd, start, n_top)) /
                   std::sqrt(2.0);

    EpsTable table;
    table.noise_floor = floor;
    table.n_top = n_top;
    for (std::size_t j = 0; j < epsilons.size(); ++j) {
        ModelParams pe = p;
        pe.epsilon = epsilons[j];
        ReplicaSpec spec{pe, ProcessTag{ProcessKind::pdmp, 0}, z0.n, z0.h, 0, T, {}};
        auto terminal = run_replicas_terminal(
            spec, replicas, seed, static_cast<std::uint64_t>(replicas) * (j + 1));
        table.rows.push_back(
            EpsRow{epsilons[j], tv_distance(prey_marginal(terminal, start, n_top), ref_marginal)});
    }
    return table;
}

IbmCompare ibm_vs_pdmp(const ModelParams& p, std::int64_t K, const State& z0, double T,
                       int replicas, std::uint64_t seed, std::int64_t n_top) {
    p.validate();
    validate_state(p, z0);
    if (K < 1) throw std::invalid_argument("ibm_vs_pdmp: K must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("ibm_vs_pdmp: T must be > 0");
    if (replicas < 4) throw std::invalid_argument("ibm_vs_pdmp: needs at least 4 replicas");

    const std::int64_t start = p.m > 0.0 ? 0 : 1;
    const std::int64_t pred0 = std::llround(z0.h * static_cast<double>(K));

    ReplicaSpec ibm_spec{p, ProcessTag{ProcessKind::ibm, K}, z0.n, 0.0, pred0, T, {}};
    auto ibm_terminal = run_replicas_terminal(ibm_spec, replicas, seed, 0);

    ReplicaSpec pdmp_spec{p, ProcessTag{ProcessKind::pdmp, 0}, z0.n, z0.h, 0, T, {}};
    auto pdmp_terminal = run_replicas_terminal(pdmp_spec, replicas, seed,
                                               static_cast<std::uint64_t>(replicas));

    std::vector<State> even, odd;
    for (int i = 0; i < replicas; ++i)
        (i % 2 == 0 ? even : odd).push_back(pdmp_terminal[static_cast<std::size_t>(i)]);

    IbmCompare out;
    out.K = K;
    out.replicas = replicas;
    out.tv = tv_distance(prey_marginal(ibm_terminal, start, n_top),
                         prey_marginal(pdmp_terminal, start, n_top));
    out.noise_floor = tv_distance(prey_marginal(even, start, n_top),
                                  prey_marginal(odd, start, n_top)) /
                      std::sqrt(2.0);
    return out;
}

}  // namespace preypred
