#include "preypred/simulate.hpp"

#include <cmath>
#include <exception>
#include <thread>

namespace preypred {

namespace {

void check_run_args(const ModelParams& p, double T) {
    p.validate();
    if (!(T > 0.0)) throw std::invalid_argument("simulate: T must be > 0");
}

template <class RunOne>
void parallel_replicas(int R, RunOne&& run_one) {
    if (R < 1) throw std::invalid_argument("run_replicas: R must be >= 1");
    unsigned hw = std::thread::hardware_concurrency();
    unsigned workers = std::min<unsigned>(std::max(1u, hw), static_cast<unsigned>(R));
    if (workers <= 1) {
        for (int i = 0; i < R; ++i) run_one(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = static_cast<int>(w); i < R; i += static_cast<int>(workers))
                    run_one(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

State run_one_terminal(const ReplicaSpec& spec, RngStream& rng) {
    switch (spec.tag.kind) {
        case ProcessKind::pdmp:
            return simulate_pdmp_terminal(spec.params, State{spec.n0, spec.h0}, spec.T, rng,
                                          spec.opts);
        case ProcessKind::ibm:
            return simulate_ibm_terminal(spec.params, spec.tag.K, spec.n0, spec.pred0, spec.T,
                                         rng, spec.opts);
        case ProcessKind::averaged:
            return simulate_averaged_terminal(spec.params, spec.n0, spec.T, rng, spec.opts);
    }
    throw std::logic_error("run_replicas: unknown process kind");
}

Trajectory run_one_full(const ReplicaSpec& spec, RngStream& rng) {
    switch (spec.tag.kind) {
        case ProcessKind::pdmp:
            return simulate_pdmp(spec.params, State{spec.n0, spec.h0}, spec.T, rng, spec.opts);
        case ProcessKind::ibm:
            return simulate_ibm(spec.params, spec.tag.K, spec.n0, spec.pred0, spec.T, rng,
                                spec.opts);
        case ProcessKind::averaged:
            return simulate_averaged(spec.params, spec.n0, spec.T, rng, spec.opts);
    }
    throw std::logic_error("run_replicas: unknown process kind");
}

[[noreturn]] void rethrow_with_replica(const EventCeilingError& e, int replica) {
    throw EventCeilingError(e.ceiling(), replica);
}

}  // namespace

Trajectory simulate_pdmp(const ModelParams& p, const State& z0, double T, RngStream& rng,
                         const SimOptions& opts) {
    check_run_args(p, T);
    validate_state(p, z0);
    Trajectory traj{p, ProcessTag{ProcessKind::pdmp, 0}, z0, T, {}, rng.master_seed(),
                    rng.replica_index()};
    State final_state = detail::pdmp_core(p, z0, T, rng, opts,
                                          [&](double t, EventKind kind, const State& after) {
                                              traj.events.push_back(Event{t, kind, after});
                                          });
    traj.events.push_back(Event{T, EventKind::end, final_state});
    return traj;
}

State simulate_pdmp_terminal(const ModelParams& p, const State& z0, double T, RngStream& rng,
                             const SimOptions& opts) {
    check_run_args(p, T);
    validate_state(p, z0);
    return detail::pdmp_core(p, z0, T, rng, opts, [](double, EventKind, const State&) {});
}

std::vector<State> simulate_pdmp_snapshots(const ModelParams& p, const State& z0,
                                           std::span<const double> times, RngStream& rng,
                                           const SimOptions& opts) {
    if (times.empty()) return {};
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0)
        throw std::invalid_argument("simulate_pdmp_snapshots: times must be sorted and >= 0");
    const double T = times.back() > 0.0 ? times.back() : 1e-12;
    check_run_args(p, T);
    validate_state(p, z0);

    std::vector<State> out;
    out.reserve(times.size());
    State seg = z0;
    double seg_t = 0.0;
    std::size_t i = 0;
    auto flush_before = [&](double limit) {
        while (i < times.size() && times[i] < limit) {
            out.push_back(State{seg.n, flow(p, seg.n, seg.h, times[i] - seg_t)});
            ++i;
        }
    };
    detail::pdmp_core(p, z0, T, rng, opts, [&](double t, EventKind, const State& after) {
        flush_before(t);
        seg = after;
        seg_t = t;
    });
    while (i < times.size()) {
        out.push_back(State{seg.n, flow(p, seg.n, seg.h, times[i] - seg_t)});
        ++i;
    }
    return out;
}

Trajectory simulate_ibm(const ModelParams& p, std::int64_t K, std::int64_t n0,
                        std::int64_t pred0, double T, RngStream& rng, const SimOptions& opts) {
    check_run_args(p, T);
    if (K < 1) throw std::invalid_argument("simulate_ibm: K must be >= 1");
    if (pred0 < 0) throw std::invalid_argument("simulate_ibm: predator count must be >= 0");
    validate_state(p, State{n0, 0.0});
    Trajectory traj{p, ProcessTag{ProcessKind::ibm, K},
                    State{n0, static_cast<double>(pred0) / static_cast<double>(K)}, T, {},
                    rng.master_seed(), rng.replica_index()};
    auto [n_end, pred_end] = detail::ibm_core(p, K, n0, pred0, T, rng, opts,
                                              [&](double t, EventKind kind, const State& after) {
                                                  traj.events.push_back(Event{t, kind, after});
                                              });
    traj.events.push_back(
        Event{T, EventKind::end,
              State{n_end, static_cast<double>(pred_end) / static_cast<double>(K)}});
    return traj;
}

State simulate_ibm_terminal(const ModelParams& p, std::int64_t K, std::int64_t n0,
                            std::int64_t pred0, double T, RngStream& rng,
                            const SimOptions& opts) {
    check_run_args(p, T);
    if (K < 1) throw std::invalid_argument("simulate_ibm: K must be >= 1");
    if (pred0 < 0) throw std::invalid_argument("simulate_ibm: predator count must be >= 0");
    validate_state(p, State{n0, 0.0});
    auto [n_end, pred_end] =
        detail::ibm_core(p, K, n0, pred0, T, rng, opts, [](double, EventKind, const State&) {});
    return State{n_end, static_cast<double>(pred_end) / static_cast<double>(K)};
}

Trajectory simulate_averaged(const ModelParams& p, std::int64_t n0, double T, RngStream& rng,
                             const SimOptions& opts) {
    check_run_args(p, T);
    validate_state(p, State{n0, 0.0});
    Trajectory traj{p, ProcessTag{ProcessKind::averaged, 0}, State{n0, equilibrium(p, n0)}, T,
                    {}, rng.master_seed(), rng.replica_index()};
    State final_state = detail::averaged_core(p, n0, T, rng, opts,
                                              [&](double t, EventKind kind, const State& after) {
                                                  traj.events.push_back(Event{t, kind, after});
                                              });
    traj.events.push_back(Event{T, EventKind::end, final_state});
    return traj;
}

State simulate_averaged_terminal(const ModelParams& p, std::int64_t n0, double T, RngStream& rng,
                                 const SimOptions& opts) {
    check_run_args(p, T);
    validate_state(p, State{n0, 0.0});
    return detail::averaged_core(p, n0, T, rng, opts, [](double, EventKind, const State&) {});
}

std::vector<State> run_replicas_terminal(const ReplicaSpec& spec, int R,
                                         std::uint64_t master_seed,
                                         std::uint64_t stream_offset) {
    std::vector<State> out(static_cast<std::size_t>(R));
    parallel_replicas(R, [&](int i) {
        RngStream rng(master_seed, stream_offset + static_cast<std::uint64_t>(i));
        try {
            out[static_cast<std::size_t>(i)] = run_one_terminal(spec, rng);
        } catch (const EventCeilingError& e) {
            rethrow_with_replica(e, i);
        }
    });
    return out;
}

std::vector<Trajectory> run_replicas(const ReplicaSpec& spec, int R, std::uint64_t master_seed,
                                     std::uint64_t stream_offset) {
    std::vector<Trajectory> out(static_cast<std::size_t>(R));
    parallel_replicas(R, [&](int i) {
        RngStream rng(master_seed, stream_offset + static_cast<std::uint64_t>(i));
        try {
            out[static_cast<std::size_t>(i)] = run_one_full(spec, rng);
        } catch (const EventCeilingError& e) {
            rethrow_with_replica(e, i);
        }
    });
    return out;
}

std::vector<std::vector<State>> run_replicas_snapshots(const ReplicaSpec& spec,
                                                       std::span<const double> times, int R,
                                                       std::uint64_t master_seed,
                                                       std::uint64_t stream_offset) {
    if (spec.tag.kind != ProcessKind::pdmp)
        throw std::invalid_argument("run_replicas_snapshots: only the pdmp process is supported");
    std::vector<std::vector<State>> out(static_cast<std::size_t>(R));
    parallel_replicas(R, [&](int i) {
        RngStream rng(master_seed, stream_offset + static_cast<std::uint64_t>(i));
        try {
            out[static_cast<std::size_t>(i)] =
                simulate_pdmp_snapshots(spec.params, State{spec.n0, spec.h0}, times, rng,
                                        spec.opts);
        } catch (const EventCeilingError& e) {
            rethrow_with_replica(e, i);
        }
    });
    return out;
}

}  // namespace preypred
