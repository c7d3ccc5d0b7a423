#ifndef PREYPRED_SIMULATE_HPP
#define PREYPRED_SIMULATE_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "preypred/rates.hpp"
#include "preypred/rng.hpp"
#include "preypred/trajectory.hpp"

namespace preypred {

enum class JumpSampler {
    thinning,   ///< default: accept/reject against a refreshed constant bound
    inversion,  ///< validation sampler: closed-form hazard inversion
};

struct SimOptions {
    JumpSampler sampler = JumpSampler::thinning;
    std::uint64_t max_events = 100'000'000;  ///< per-replica event ceiling
};

/// Raised when a single replica exceeds SimOptions::max_events.
class EventCeilingError : public std::runtime_error {
  public:
    EventCeilingError(std::uint64_t ceiling, std::int64_t replica = -1)
        : std::runtime_error(make_message(ceiling, replica)),
          ceiling_(ceiling),
          replica_(replica) {}
    std::uint64_t ceiling() const { return ceiling_; }
    std::int64_t replica() const { return replica_; }

  private:
    static std::string make_message(std::uint64_t ceiling, std::int64_t replica) {
        std::string msg = "event-count ceiling of " + std::to_string(ceiling) + " events exceeded";
        if (replica >= 0) msg += " in replica " + std::to_string(replica);
        return msg;
    }
    std::uint64_t ceiling_;
    std::int64_t replica_;
};

struct Jump {
    double dt = 0.0;
    EventKind kind = EventKind::prey_birth;
};

/// Exact sample of the next prey jump (waiting time and type) by thinning:
/// propose at the constant rate total_rate(n, max(h, h*_n)), which dominates
/// the true rate along the flow, accept with the ratio of the true rate at
/// the flowed state, and refresh the bound after every proposal. The accepted
/// time has the first-jump law with survival e^{-Theta(z, t)}.
inline Jump next_jump_thinning(const ModelParams& p, const State& s, RngStream& rng) {
    const double hstar = equilibrium(p, s.n);
    double elapsed = 0.0;
    double h_now = s.h;
    for (;;) {
        const double bound = total_rate(p, State{s.n, std::max(h_now, hstar)});
        elapsed += rng.exponential() / bound;
        h_now = flow(p, s.n, s.h, elapsed);
        const JumpRates jr = rates(p, State{s.n, h_now});
        const double x = rng.uniform() * bound;
        if (x <= jr.birth) return {elapsed, EventKind::prey_birth};
        if (x <= jr.birth + jr.death) return {elapsed, EventKind::prey_death};
    }
}

/// Same first-jump law as next_jump_thinning, obtained by inverting the
/// closed-form cumulative hazard at a standard exponential draw. Kept as an
/// independent sampler for cross-validation.
inline Jump next_jump_inversion(const ModelParams& p, const State& s, RngStream& rng) {
    const double t = invert_hazard(p, s, rng.exponential());
    const JumpRates jr = rates(p, State{s.n, flow(p, s.n, s.h, t)});
    const double x = rng.uniform() * jr.total();
    return {t, x <= jr.birth ? EventKind::prey_birth : EventKind::prey_death};
}

namespace detail {

/// Event loop of the hybrid process: flow between jumps, exact jump sampling,
/// callback per jump. Returns the state at the horizon.
template <class OnEvent>
State pdmp_core(const ModelParams& p, const State& z0, double T, RngStream& rng,
                const SimOptions& opts, OnEvent&& on_event) {
    State cur = z0;
    double t = 0.0;
    std::uint64_t count = 0;
    for (;;) {
        const Jump j = opts.sampler == JumpSampler::thinning ? next_jump_thinning(p, cur, rng)
                                                             : next_jump_inversion(p, cur, rng);
        if (t + j.dt >= T) return State{cur.n, flow(p, cur.n, cur.h, T - t)};
        t += j.dt;
        cur = State{cur.n + (j.kind == EventKind::prey_birth ? 1 : -1),
                    flow(p, cur.n, cur.h, j.dt)};
        if (++count > opts.max_events) throw EventCeilingError(opts.max_events);
        on_event(t, j.kind, cur);
    }
}

template <class OnEvent>
State averaged_core(const ModelParams& p, std::int64_t n0, double T, RngStream& rng,
                    const SimOptions& opts, OnEvent&& on_event) {
    std::int64_t n = n0;
    double t = 0.0;
    std::uint64_t count = 0;
    for (;;) {
        const double nd = static_cast<double>(n);
        const double birth = p.b * nd + p.m;
        const double death =
            p.death_active(n) ? nd * (p.d + p.c * nd + p.B * equilibrium(p, n)) : 0.0;
        const double total = birth + death;
        t += rng.exponential() / total;
        if (t >= T) return State{n, equilibrium(p, n)};
        const double x = rng.uniform() * total;
        const EventKind kind = x <= birth ? EventKind::prey_birth : EventKind::prey_death;
        n += kind == EventKind::prey_birth ? 1 : -1;
        if (++count > opts.max_events) throw EventCeilingError(opts.max_events);
        on_event(t, kind, State{n, equilibrium(p, n)});
    }
}

}  // namespace detail

/// Transition rates of the microscopic community at scale K, with predator
/// parameters K-rescaled as B/K, Kr, D, C/K (and epsilon applied to the
/// predator side first). `pred` is the integer predator count.
struct IbmRates {
    double prey_birth = 0.0;
    double prey_death = 0.0;
    double pred_birth = 0.0;
    double pred_death = 0.0;
    double total() const { return prey_birth + prey_death + pred_birth + pred_death; }
};

inline IbmRates ibm_rates(const ModelParams& p, std::int64_t K, std::int64_t n,
                          std::int64_t pred) {
    const double nd = static_cast<double>(n);
    const double hc = static_cast<double>(pred);
    const double Kd = static_cast<double>(K);
    const double BK = p.B / Kd;
    IbmRates out;
    out.prey_birth = p.b * nd + p.m;
    if (p.death_active(n)) out.prey_death = nd * (p.d + p.c * nd + BK * hc);
    out.pred_birth = hc * (p.r / p.epsilon) * p.B * nd;  // r^K B^K = rB, K-free
    out.pred_death = hc * (p.D / p.epsilon + p.C / (Kd * p.epsilon) * hc);
    return out;
}

namespace detail {

template <class OnEvent>
std::pair<std::int64_t, std::int64_t> ibm_core(const ModelParams& p, std::int64_t K,
                                               std::int64_t n0, std::int64_t pred0, double T,
                                               RngStream& rng, const SimOptions& opts,
                                               OnEvent&& on_event) {
    std::int64_t n = n0;
    std::int64_t pred = pred0;
    double t = 0.0;
    std::uint64_t count = 0;
    const double Kd = static_cast<double>(K);
    for (;;) {
        const IbmRates ir = ibm_rates(p, K, n, pred);
        const double total = ir.total();
        if (total <= 0.0) return {n, pred};  // fully absorbed (only possible with m = 0, n = 0)
        t += rng.exponential() / total;
        if (t >= T) return {n, pred};
        const double x = rng.uniform() * total;
        EventKind kind;
        if (x <= ir.prey_birth) {
            kind = EventKind::prey_birth;
            ++n;
        } else if (x <= ir.prey_birth + ir.prey_death) {
            kind = EventKind::prey_death;
            --n;
        } else if (x <= ir.prey_birth + ir.prey_death + ir.pred_birth) {
            kind = EventKind::ibm_pred_birth;
            ++pred;
        } else {
            kind = EventKind::ibm_pred_death;
            --pred;
        }
        if (++count > opts.max_events) throw EventCeilingError(opts.max_events);
        on_event(t, kind, State{n, static_cast<double>(pred) / Kd});
    }
}

}  // namespace detail

Trajectory simulate_pdmp(const ModelParams& p, const State& z0, double T, RngStream& rng,
                         const SimOptions& opts = {});
State simulate_pdmp_terminal(const ModelParams& p, const State& z0, double T, RngStream& rng,
                             const SimOptions& opts = {});
/// States observed at the given nondecreasing times (cadlag convention:
/// a snapshot at a jump time sees the post-jump state).
std::vector<State> simulate_pdmp_snapshots(const ModelParams& p, const State& z0,
                                           std::span<const double> times, RngStream& rng,
                                           const SimOptions& opts = {});

/// Gillespie simulation of the four-reaction microscopic chain; reports the
/// rescaled predator density count/K in the event log.
Trajectory simulate_ibm(const ModelParams& p, std::int64_t K, std::int64_t n0,
                        std::int64_t pred0, double T, RngStream& rng, const SimOptions& opts = {});
State simulate_ibm_terminal(const ModelParams& p, std::int64_t K, std::int64_t n0,
                            std::int64_t pred0, double T, RngStream& rng,
                            const SimOptions& opts = {});

/// Birth-death chain of the averaged (epsilon -> 0) prey process; the
/// recorded predator density is the paired equilibrium h*_n.
Trajectory simulate_averaged(const ModelParams& p, std::int64_t n0, double T, RngStream& rng,
                             const SimOptions& opts = {});
State simulate_averaged_terminal(const ModelParams& p, std::int64_t n0, double T, RngStream& rng,
                                 const SimOptions& opts = {});

/// One batch of independent replicas: process choice, shared parameters,
/// initial condition and horizon. For the IBM the initial predator count is
/// the integer `pred0`; other processes use the density h0.
struct ReplicaSpec {
    ModelParams params;
    ProcessTag tag;
    std::int64_t n0 = 1;
    double h0 = 0.0;
    std::int64_t pred0 = 0;
    double T = 0.0;
    SimOptions opts;
};

/// R independent replicas on streams (master_seed, stream_offset + i).
/// Replicas run concurrently; results are ordered by replica index, so the
/// aggregate is independent of scheduling. Per-replica failures carry the
/// replica index.
std::vector<State> run_replicas_terminal(const ReplicaSpec& spec, int R,
                                         std::uint64_t master_seed,
                                         std::uint64_t stream_offset = 0);
std::vector<Trajectory> run_replicas(const ReplicaSpec& spec, int R, std::uint64_t master_seed,
                                     std::uint64_t stream_offset = 0);
/// Snapshot matrix: result[i] holds replica i's states at the given times.
std::vector<std::vector<State>> run_replicas_snapshots(const ReplicaSpec& spec,
                                                       std::span<const double> times, int R,
                                                       std::uint64_t master_seed,
                                                       std::uint64_t stream_offset = 0);

}  // namespace preypred

#endif
