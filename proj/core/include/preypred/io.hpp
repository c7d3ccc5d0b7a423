#ifndef PREYPRED_IO_HPP
#define PREYPRED_IO_HPP

#include <span>
#include <string>
#include <vector>

#include "preypred/analysis.hpp"
#include "preypred/config.hpp"
#include "preypred/trajectory.hpp"

namespace preypred {

/// Raised when a serialized payload does not match its schema.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Trajectory CSV, schema: header "t,n,h,event", one row per event and a
/// final row at the horizon with event=end. Times and densities are printed
/// with 17 significant digits so a reparse is bit-exact.
std::string trajectory_csv(const Trajectory& traj);

/// The serializable projection of a trajectory (the event log is the payload;
/// parameters and seed travel in the run metadata).
struct TrajectoryLog {
    std::vector<Event> events;
    double horizon = 0.0;

    friend bool operator==(const TrajectoryLog&, const TrajectoryLog&) = default;
};

TrajectoryLog trajectory_log(const Trajectory& traj);
TrajectoryLog parse_trajectory_csv(const std::string& text);

// JSON payloads; serialize/parse pairs round-trip to equal values.
std::string to_json(const DiscreteDistribution& dist);
DiscreteDistribution distribution_from_json(const std::string& text);

std::string to_json(const Hist2D& hist);
Hist2D hist2d_from_json(const std::string& text);

std::string to_json(const OccupationMeasure& om);
OccupationMeasure occupation_from_json(const std::string& text);

std::string to_json(const DriftReport& report);
DriftReport drift_from_json(const std::string& text);

std::string to_json(const ModeReport& report);
ModeReport mode_from_json(const std::string& text);

std::string to_json(const DecayReport& report);
DecayReport decay_from_json(const std::string& text);

std::string to_json(const EpsTable& table);
EpsTable eps_table_from_json(const std::string& text);

std::string to_json(const ReachReport& report);
ReachReport reach_from_json(const std::string& text);

std::string to_json(const IbmCompare& report);
IbmCompare ibm_compare_from_json(const std::string& text);

std::string terminal_states_json(std::span<const State> states);
std::vector<State> terminal_states_from_json(const std::string& text);

/// Effective configuration rendered back to key=value strings (17 significant
/// digits), used for the metadata echo.
KeyValues render_config(const RunConfig& cfg);

/// Run envelope: metadata plus one payload. Wall time is deliberately not
/// part of the serialized form so identical seeds give identical bytes.
struct OutputBundle {
    std::string command;
    KeyValues config_echo;
    std::string status = "ok";  ///< ok | warning | inconclusive
    std::string message;
    std::string payload_kind;
    std::string payload_json;
};

std::string bundle_json(const OutputBundle& bundle);

}  // namespace preypred

#endif
