#ifndef PREYPRED_TRAJECTORY_HPP
#define PREYPRED_TRAJECTORY_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "preypred/flow.hpp"
#include "preypred/params.hpp"

namespace preypred {

enum class EventKind { prey_birth, prey_death, ibm_pred_birth, ibm_pred_death, end };

const char* to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::end;
    State after;  ///< state just after the event; h is flow-evaluated (PDMP) or count/K (IBM)

    friend bool operator==(const Event&, const Event&) = default;
};

enum class ProcessKind { pdmp, ibm, averaged };

const char* to_string(ProcessKind k);

struct ProcessTag {
    ProcessKind kind = ProcessKind::pdmp;
    std::int64_t K = 0;  ///< IBM scale, meaningful only for ProcessKind::ibm

    friend bool operator==(const ProcessTag&, const ProcessTag&) = default;
};

/// Time-ordered event log of one simulated path. Events have strictly
/// increasing times <= horizon; the final entry is the `end` marker at the
/// horizon. Replaying with the same seed reproduces the identical list.
struct Trajectory {
    ModelParams params;
    ProcessTag tag;
    State initial;
    double horizon = 0.0;
    std::vector<Event> events;
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
};

/// State at an arbitrary time t in [0, horizon]: between prey jumps h follows
/// the closed-form flow (PDMP) or stays constant (IBM, averaged).
State state_at(const Trajectory& traj, double t);

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::prey_birth: return "prey_birth";
        case EventKind::prey_death: return "prey_death";
        case EventKind::ibm_pred_birth: return "ibm_pred_birth";
        case EventKind::ibm_pred_death: return "ibm_pred_death";
        case EventKind::end: return "end";
    }
    return "end";
}

inline EventKind event_kind_from_string(const std::string& s) {
    if (s == "prey_birth") return EventKind::prey_birth;
    if (s == "prey_death") return EventKind::prey_death;
    if (s == "ibm_pred_birth") return EventKind::ibm_pred_birth;
    if (s == "ibm_pred_death") return EventKind::ibm_pred_death;
    if (s == "end") return EventKind::end;
    throw std::invalid_argument("unknown event kind: " + s);
}

inline const char* to_string(ProcessKind k) {
    switch (k) {
        case ProcessKind::pdmp: return "pdmp";
        case ProcessKind::ibm: return "ibm";
        case ProcessKind::averaged: return "averaged";
    }
    return "pdmp";
}

inline State state_at(const Trajectory& traj, double t) {
    if (!(t >= 0.0 && t <= traj.horizon))
        throw std::invalid_argument("state_at: t outside [0, horizon]");
    State base = traj.initial;
    double t0 = 0.0;
    for (const Event& ev : traj.events) {
        if (ev.kind == EventKind::end || ev.time > t) break;
        base = ev.after;
        t0 = ev.time;
    }
    if (traj.tag.kind == ProcessKind::pdmp)
        return State{base.n, flow(traj.params, base.n, base.h, t - t0)};
    return base;
}

}  // namespace preypred

#endif
