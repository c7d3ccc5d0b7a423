// Command-line front end: simulate | invariant | mode | drift | compare |
// reach | occupation. Flags mirror the config keys; --config FILE merges the
// file first, explicit flags override. All stochastic commands require
// --seed. Exit codes: 0 ok, 2 config error, 3 event ceiling, 4 inconclusive.
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "preypred/io.hpp"

using namespace preypred;

namespace {

const std::vector<std::string> kConfigKeys = {
    "b",        "d",           "c",            "B",            "r",          "D",
    "C",        "m",           "epsilon",      "process",      "K",          "n0",
    "h0",       "n0_b",        "h0_b",         "T",            "replicas",   "seed",
    "N_max",    "sampler",     "max_events",   "n_top",        "lyapunov",   "gamma",
    "grid_n",   "grid_h",      "grid_steps",   "compare",      "epsilons",   "times",
    "target_n", "target_h_lo", "target_h_hi",  "window_start", "window_end", "hist"};

struct CommandIo {
    std::string config_path;
    std::string out_path;
    std::map<std::string, std::shared_ptr<std::string>> flags;
    std::map<std::string, CLI::Option*> options;
};

void attach_options(CLI::App* cmd, CommandIo& io) {
    cmd->add_option("--config", io.config_path, "config file (key=value lines or flat JSON)");
    cmd->add_option("--out", io.out_path, "output file (default: stdout)");
    for (const std::string& key : kConfigKeys) {
        auto slot = std::make_shared<std::string>();
        io.flags[key] = slot;
        io.options[key] = cmd->add_option("--" + key, *slot, "config key " + key);
    }
}

RunConfig resolve_config(const CommandIo& io) {
    KeyValues kv;
    if (!io.config_path.empty()) {
        std::ifstream in(io.config_path);
        if (!in) throw ConfigError("config: cannot open file '" + io.config_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        kv = parse_key_values(buffer.str());
    }
    for (const auto& [key, slot] : io.flags)
        if (io.options.at(key)->count() > 0) kv[key] = *slot;
    return validate_config(kv);
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

void require_seed(const RunConfig& cfg) {
    require(cfg.has_seed, "config: key 'seed' is required for stochastic commands");
}

void require_horizon(const RunConfig& cfg) {
    require(cfg.T > 0.0, "config: key 'T' must be > 0");
}

SimOptions sim_options(const RunConfig& cfg) { return SimOptions{cfg.sampler, cfg.max_events}; }

ReplicaSpec replica_spec(const RunConfig& cfg) {
    ReplicaSpec spec;
    spec.params = cfg.params;
    spec.tag = ProcessTag{cfg.process, cfg.process == ProcessKind::ibm ? cfg.K : 0};
    spec.n0 = cfg.n0;
    spec.h0 = cfg.h0;
    spec.pred0 = std::llround(cfg.h0 * static_cast<double>(cfg.K));
    spec.T = cfg.T;
    spec.opts = sim_options(cfg);
    return spec;
}

Trajectory run_single(const RunConfig& cfg) {
    RngStream rng(cfg.seed, 0);
    switch (cfg.process) {
        case ProcessKind::pdmp:
            return simulate_pdmp(cfg.params, State{cfg.n0, cfg.h0}, cfg.T, rng,
                                 sim_options(cfg));
        case ProcessKind::ibm:
            return simulate_ibm(cfg.params, cfg.K, cfg.n0,
                                std::llround(cfg.h0 * static_cast<double>(cfg.K)), cfg.T, rng,
                                sim_options(cfg));
        case ProcessKind::averaged:
            return simulate_averaged(cfg.params, cfg.n0, cfg.T, rng, sim_options(cfg));
    }
    throw ConfigError("config: key 'process' has an unknown value");
}

struct CommandResult {
    std::string text;
    int exit_code = 0;
};

OutputBundle make_bundle(const std::string& command, const RunConfig& cfg) {
    OutputBundle bundle;
    bundle.command = command;
    bundle.config_echo = render_config(cfg);
    return bundle;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
    require_seed(cfg);
    require_horizon(cfg);
    if (cfg.replicas == 1) return {trajectory_csv(run_single(cfg)), 0};

    auto terminal = run_replicas_terminal(replica_spec(cfg), cfg.replicas, cfg.seed);
    OutputBundle bundle = make_bundle("simulate", cfg);
    if (cfg.hist) {
        Hist2D skeleton = make_hstar_hist(cfg.params, cfg.params.m > 0.0 ? 0 : 1, cfg.n_top);
        bundle.payload_kind = "histogram";
        bundle.payload_json = to_json(empirical_invariant(terminal, skeleton));
    } else {
        bundle.payload_kind = "terminal_states";
        bundle.payload_json = terminal_states_json(terminal);
    }
    return {bundle_json(bundle), 0};
}

CommandResult cmd_invariant(const RunConfig& cfg) {
    DiscreteDistribution dist = averaged_invariant(cfg.params, cfg.N_max);
    OutputBundle bundle = make_bundle("invariant", cfg);
    bundle.payload_kind = "distribution";
    bundle.payload_json = to_json(dist);
    if (dist.truncation_warning) {
        bundle.status = "warning";
        bundle.message = "N_max is below the mode (last recursion ratio > 1)";
    }
    return {bundle_json(bundle), 0};
}

CommandResult cmd_mode(const RunConfig& cfg) {
    OutputBundle bundle = make_bundle("mode", cfg);
    bundle.payload_kind = "mode_report";
    bundle.payload_json = to_json(invariant_mode(cfg.params, cfg.N_max));
    return {bundle_json(bundle), 0};
}

CommandResult cmd_drift(const RunConfig& cfg) {
    DriftGrid grid{cfg.grid_n, cfg.grid_h, cfg.grid_steps};
    DriftReport report = drift_check(cfg.params, cfg.lyapunov, cfg.gamma, grid);
    OutputBundle bundle = make_bundle("drift", cfg);
    bundle.payload_kind = "drift_report";
    bundle.payload_json = to_json(report);
    if (!report.valid) {
        bundle.status = "inconclusive";
        bundle.message = "no valid (gamma, delta, K) certified on this grid";
    }
    return {bundle_json(bundle), report.valid ? 0 : 4};
}

CommandResult cmd_compare(const RunConfig& cfg) {
    require_seed(cfg);
    if (cfg.compare != "ergodicity") require_horizon(cfg);  // ergodicity runs to times.back()
    OutputBundle bundle = make_bundle("compare", cfg);
    int exit_code = 0;
    if (cfg.compare == "epsilon") {
        require(!cfg.epsilons.empty(), "config: key 'epsilons' is required for compare=epsilon");
        EpsTable table =
            epsilon_convergence_suite(cfg.params, cfg.epsilons, State{cfg.n0, cfg.h0}, cfg.T,
                                      cfg.replicas, cfg.seed, cfg.n_top);
        bundle.payload_kind = "epsilon_table";
        bundle.payload_json = to_json(table);
    } else if (cfg.compare == "ibm") {
        require(cfg.K >= 1, "config: key 'K' is required for compare=ibm");
        IbmCompare report = ibm_vs_pdmp(cfg.params, cfg.K, State{cfg.n0, cfg.h0}, cfg.T,
                                        cfg.replicas, cfg.seed, cfg.n_top);
        bundle.payload_kind = "ibm_compare";
        bundle.payload_json = to_json(report);
    } else {
        require(!cfg.times.empty(), "config: key 'times' is required for compare=ergodicity");
        DecayReport report =
            ergodicity_decay(cfg.params, State{cfg.n0, cfg.h0}, State{cfg.n0_b, cfg.h0_b},
                             cfg.times, cfg.replicas, cfg.seed, cfg.n_top);
        bundle.payload_kind = "decay_report";
        bundle.payload_json = to_json(report);
        if (!report.conclusive) {
            bundle.status = "inconclusive";
            bundle.message = "all TV values at the statistical noise floor";
            exit_code = 4;
        }
    }
    return {bundle_json(bundle), exit_code};
}

CommandResult cmd_reach(const RunConfig& cfg) {
    require_seed(cfg);
    require_horizon(cfg);
    require(cfg.target_h_lo < cfg.target_h_hi,
            "config: keys 'target_h_lo' < 'target_h_hi' are required");
    ReachReport report = reachability(cfg.params, State{cfg.n0, cfg.h0}, cfg.target_n,
                                      cfg.target_h_lo, cfg.target_h_hi, cfg.T, cfg.replicas,
                                      cfg.seed);
    OutputBundle bundle = make_bundle("reach", cfg);
    bundle.payload_kind = "reach_report";
    bundle.payload_json = to_json(report);
    return {bundle_json(bundle), 0};
}

CommandResult cmd_occupation(const RunConfig& cfg) {
    require_seed(cfg);
    require_horizon(cfg);
    Trajectory traj = run_single(cfg);
    double w0 = cfg.window_start;
    double w1 = cfg.window_end < 0.0 ? cfg.T : cfg.window_end;
    Hist2D skeleton = make_hstar_hist(cfg.params, cfg.params.m > 0.0 ? 0 : 1, cfg.n_top);
    OccupationMeasure om = occupation_measure(traj, w0, w1, skeleton.h_edges);
    OutputBundle bundle = make_bundle("occupation", cfg);
    bundle.payload_kind = "occupation";
    bundle.payload_json = to_json(om);
    return {bundle_json(bundle), 0};
}

void write_output(const CommandIo& io, const std::string& text) {
    if (io.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(io.out_path, std::ios::binary);
    if (!out) throw ConfigError("config: cannot open output file '" + io.out_path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact simulation and stationary analysis of a hybrid prey-predator community"};
    app.require_subcommand(1);

    struct Entry {
        CLI::App* cmd = nullptr;
        CommandIo io;
        CommandResult (*run)(const RunConfig&) = nullptr;
    };
    std::vector<std::unique_ptr<Entry>> entries;
    auto add_command = [&](const std::string& name, const std::string& desc,
                           CommandResult (*run)(const RunConfig&)) {
        auto entry = std::make_unique<Entry>();
        entry->cmd = app.add_subcommand(name, desc);
        entry->run = run;
        attach_options(entry->cmd, entry->io);
        entries.push_back(std::move(entry));
    };
    add_command("simulate", "simulate pdmp | ibm | averaged replicas", cmd_simulate);
    add_command("invariant", "closed-form averaged invariant distribution", cmd_invariant);
    add_command("mode", "mode of the averaged invariant plus polynomial diagnostic", cmd_mode);
    add_command("drift", "Foster-Lyapunov drift inequality grid check", cmd_drift);
    add_command("compare", "epsilon averaging | ibm limit | ergodicity decay", cmd_compare);
    add_command("reach", "empirical reachability of a target window", cmd_reach);
    add_command("occupation", "time-weighted predator occupation measure", cmd_occupation);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (const auto& entry : entries) {
        if (!entry->cmd->parsed()) continue;
        try {
            auto start = std::chrono::steady_clock::now();
            RunConfig cfg = resolve_config(entry->io);
            CommandResult result = entry->run(cfg);
            write_output(entry->io, result.text);
            std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
            std::cerr << "wall_time_s=" << wall.count() << "\n";
            return result.exit_code;
        } catch (const ConfigError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        } catch (const EventCeilingError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return 2;
}
