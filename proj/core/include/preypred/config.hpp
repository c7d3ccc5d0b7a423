#ifndef PREYPRED_CONFIG_HPP
#define PREYPRED_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "preypred/analysis.hpp"
#include "preypred/simulate.hpp"

namespace preypred {

/// Configuration problem: unknown key, type error or constraint violation.
/// The message names the key and the constraint.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Validated run configuration shared by all subcommands. Defaults:
/// epsilon = 1, m = 0, N_max = 200; the seven demographic rates are required.
struct RunConfig {
    ModelParams params;

    ProcessKind process = ProcessKind::pdmp;
    std::int64_t K = 0;  ///< IBM scale, required when process = ibm

    std::int64_t n0 = 1;
    double h0 = 0.0;
    std::int64_t n0_b = 0;  ///< second initial prey count (compare=ergodicity)
    double h0_b = 0.0;

    double T = 0.0;
    int replicas = 1;
    bool has_seed = false;
    std::uint64_t seed = 0;

    std::int64_t N_max = 200;
    JumpSampler sampler = JumpSampler::thinning;
    std::uint64_t max_events = 100'000'000;
    std::int64_t n_top = 60;
    bool hist = false;  ///< emit the 2D histogram instead of terminal states

    Lyapunov lyapunov = Lyapunov::V;
    double gamma = 0.1;
    std::int64_t grid_n = 500;
    double grid_h = 500.0;
    std::int64_t grid_steps = 500;

    std::string compare = "epsilon";  ///< epsilon | ibm | ergodicity
    std::vector<double> epsilons;
    std::vector<double> times;

    std::int64_t target_n = 0;
    double target_h_lo = 0.0;
    double target_h_hi = 0.0;

    double window_start = 0.0;
    double window_end = -1.0;  ///< -1 means "up to T"
};

using KeyValues = std::map<std::string, std::string>;

/// Splits a config document into key/value pairs. Accepts whitespace-
/// separated key=value tokens ('#' starts a comment) or a flat JSON object.
KeyValues parse_key_values(const std::string& text);

/// Validates and applies a key/value map on top of defaults. Unknown keys,
/// type errors and invariant violations raise ConfigError naming the key.
RunConfig validate_config(const KeyValues& kv);

/// parse_key_values followed by validate_config.
RunConfig parse_config(const std::string& text);

}  // namespace preypred

#endif
