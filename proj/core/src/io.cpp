#include "preypred/io.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "preypred/version.hpp"

namespace preypred {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& token) {
    std::size_t pos = 0;
    double x = std::stod(token, &pos);
    if (pos != token.size()) throw ParseError("trajectory csv: bad number '" + token + "'");
    return x;
}

ordered_json states_to_json(std::span<const State> states) {
    ordered_json arr = ordered_json::array();
    for (const State& s : states) arr.push_back(ordered_json::array({s.n, s.h}));
    return arr;
}

std::vector<State> states_from_json(const ordered_json& arr) {
    std::vector<State> out;
    for (const auto& item : arr)
        out.push_back(State{item.at(0).get<std::int64_t>(), item.at(1).get<double>()});
    return out;
}

template <class T, class Fn>
T guarded_parse(const std::string& text, Fn&& fn) {
    try {
        return fn(ordered_json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("payload parse failed: ") + e.what());
    }
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,n,h,event\n";
    for (const Event& ev : traj.events) {
        out += format17(ev.time);
        out += ',';
        out += std::to_string(ev.after.n);
        out += ',';
        out += format17(ev.after.h);
        out += ',';
        out += to_string(ev.kind);
        out += '\n';
    }
    return out;
}

TrajectoryLog trajectory_log(const Trajectory& traj) {
    return TrajectoryLog{traj.events, traj.horizon};
}

TrajectoryLog parse_trajectory_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || line != "t,n,h,event")
        throw ParseError("trajectory csv: missing 't,n,h,event' header");
    TrajectoryLog log;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::stringstream fields(line);
        std::string t_str, n_str, h_str, kind_str;
        if (!std::getline(fields, t_str, ',') || !std::getline(fields, n_str, ',') ||
            !std::getline(fields, h_str, ',') || !std::getline(fields, kind_str))
            throw ParseError("trajectory csv: malformed row '" + line + "'");
        Event ev;
        ev.time = parse_double(t_str);
        ev.after.n = std::stoll(n_str);
        ev.after.h = parse_double(h_str);
        ev.kind = event_kind_from_string(kind_str);
        log.events.push_back(ev);
    }
    if (log.events.empty() || log.events.back().kind != EventKind::end)
        throw ParseError("trajectory csv: missing final end row");
    log.horizon = log.events.back().time;
    return log;
}

std::string to_json(const DiscreteDistribution& dist) {
    ordered_json doc;
    ordered_json ns = ordered_json::array();
    for (std::size_t i = 0; i < dist.p.size(); ++i)
        ns.push_back(dist.support_start + static_cast<std::int64_t>(i));
    doc["n"] = std::move(ns);
    doc["p"] = dist.p;
    doc["tail_mass"] = dist.tail_mass;
    doc["N_max"] = dist.n_max();
    if (dist.truncation_warning) doc["truncation_warning"] = true;
    return doc.dump();
}

DiscreteDistribution distribution_from_json(const std::string& text) {
    return guarded_parse<DiscreteDistribution>(text, [](const ordered_json& doc) {
        DiscreteDistribution dist;
        auto ns = doc.at("n").get<std::vector<std::int64_t>>();
        if (ns.empty()) throw ParseError("distribution: empty support");
        dist.support_start = ns.front();
        dist.p = doc.at("p").get<std::vector<double>>();
        if (dist.p.size() != ns.size())
            throw ParseError("distribution: n and p have different lengths");
        dist.tail_mass = doc.at("tail_mass").get<double>();
        dist.truncation_warning = doc.value("truncation_warning", false);
        if (doc.at("N_max").get<std::int64_t>() != dist.n_max())
            throw ParseError("distribution: N_max inconsistent with support");
        return dist;
    });
}

std::string to_json(const Hist2D& hist) {
    ordered_json doc;
    doc["n_lo"] = hist.n_lo;
    doc["n_hi"] = hist.n_hi;
    doc["h_edges"] = hist.h_edges;
    doc["w"] = hist.w;
    return doc.dump();
}

Hist2D hist2d_from_json(const std::string& text) {
    return guarded_parse<Hist2D>(text, [](const ordered_json& doc) {
        Hist2D hist;
        hist.n_lo = doc.at("n_lo").get<std::int64_t>();
        hist.n_hi = doc.at("n_hi").get<std::int64_t>();
        hist.h_edges = doc.at("h_edges").get<std::vector<double>>();
        hist.w = doc.at("w").get<std::vector<double>>();
        if (hist.w.size() != hist.n_rows() * hist.n_cols())
            throw ParseError("hist2d: weight length does not match bins");
        return hist;
    });
}

std::string to_json(const OccupationMeasure& om) {
    ordered_json doc;
    doc["t0"] = om.t0;
    doc["t1"] = om.t1;
    doc["h_edges"] = om.h_edges;
    doc["w"] = om.w;
    return doc.dump();
}

OccupationMeasure occupation_from_json(const std::string& text) {
    return guarded_parse<OccupationMeasure>(text, [](const ordered_json& doc) {
        OccupationMeasure om;
        om.t0 = doc.at("t0").get<double>();
        om.t1 = doc.at("t1").get<double>();
        om.h_edges = doc.at("h_edges").get<std::vector<double>>();
        om.w = doc.at("w").get<std::vector<double>>();
        if (om.w.size() != om.h_edges.size() + 1)
            throw ParseError("occupation: weight length does not match edges");
        return om;
    });
}

std::string to_json(const DriftReport& report) {
    ordered_json doc;
    doc["valid"] = report.valid;
    doc["lyapunov"] = report.which == Lyapunov::V ? "V" : "W";
    doc["gamma"] = report.gamma;
    doc["delta"] = report.delta;
    doc["K_n"] = report.K_n;
    doc["K_h"] = report.K_h;
    doc["grid"] = {{"n_max", report.grid.n_max},
                   {"h_max", report.grid.h_max},
                   {"h_steps", report.grid.h_steps}};
    doc["worst_margin"] = report.worst_margin;
    doc["tail_ok"] = report.tail_ok;
    doc["offenders"] = states_to_json(report.offenders);
    return doc.dump();
}

DriftReport drift_from_json(const std::string& text) {
    return guarded_parse<DriftReport>(text, [](const ordered_json& doc) {
        DriftReport report;
        report.valid = doc.at("valid").get<bool>();
        report.which = doc.at("lyapunov").get<std::string>() == "W" ? Lyapunov::W : Lyapunov::V;
        report.gamma = doc.at("gamma").get<double>();
        report.delta = doc.at("delta").get<double>();
        report.K_n = doc.at("K_n").get<std::int64_t>();
        report.K_h = doc.at("K_h").get<double>();
        report.grid.n_max = doc.at("grid").at("n_max").get<std::int64_t>();
        report.grid.h_max = doc.at("grid").at("h_max").get<double>();
        report.grid.h_steps = doc.at("grid").at("h_steps").get<std::int64_t>();
        report.worst_margin = doc.at("worst_margin").get<double>();
        report.tail_ok = doc.at("tail_ok").get<bool>();
        report.offenders = states_from_json(doc.at("offenders"));
        return report;
    });
}

std::string to_json(const ModeReport& report) {
    ordered_json doc;
    doc["mode"] = report.mode;
    doc["tie"] = report.tie;
    doc["poly"] = {{"alpha", report.poly.alpha},       {"beta", report.poly.beta},
                   {"gamma", report.poly.gamma},       {"discriminant", report.poly.discriminant},
                   {"x0", report.poly.x0},             {"x1", report.poly.x1}};
    doc["poly_mode"] = report.poly_mode;
    doc["discrepancy"] = report.discrepancy;
    return doc.dump();
}

ModeReport mode_from_json(const std::string& text) {
    return guarded_parse<ModeReport>(text, [](const ordered_json& doc) {
        ModeReport report;
        report.mode = doc.at("mode").get<std::int64_t>();
        report.tie = doc.at("tie").get<bool>();
        const auto& poly = doc.at("poly");
        report.poly.alpha = poly.at("alpha").get<double>();
        report.poly.beta = poly.at("beta").get<double>();
        report.poly.gamma = poly.at("gamma").get<double>();
        report.poly.discriminant = poly.at("discriminant").get<double>();
        report.poly.x0 = poly.at("x0").get<double>();
        report.poly.x1 = poly.at("x1").get<double>();
        report.poly_mode = doc.at("poly_mode").get<std::int64_t>();
        report.discrepancy = doc.at("discrepancy").get<bool>();
        return report;
    });
}

std::string to_json(const DecayReport& report) {
    ordered_json doc;
    ordered_json points = ordered_json::array();
    for (const DecayPoint& pt : report.points)
        points.push_back({{"t", pt.t}, {"tv", pt.tv}});
    doc["points"] = std::move(points);
    doc["noise_floor"] = report.noise_floor;
    doc["slope"] = report.slope;
    doc["intercept"] = report.intercept;
    doc["r2"] = report.r2;
    doc["points_used"] = report.points_used;
    doc["conclusive"] = report.conclusive;
    return doc.dump();
}

DecayReport decay_from_json(const std::string& text) {
    return guarded_parse<DecayReport>(text, [](const ordered_json& doc) {
        DecayReport report;
        for (const auto& pt : doc.at("points"))
            report.points.push_back(
                DecayPoint{pt.at("t").get<double>(), pt.at("tv").get<double>()});
        report.noise_floor = doc.at("noise_floor").get<double>();
        report.slope = doc.at("slope").get<double>();
        report.intercept = doc.at("intercept").get<double>();
        report.r2 = doc.at("r2").get<double>();
        report.points_used = doc.at("points_used").get<int>();
        report.conclusive = doc.at("conclusive").get<bool>();
        return report;
    });
}

std::string to_json(const EpsTable& table) {
    ordered_json doc;
    ordered_json rows = ordered_json::array();
    for (const EpsRow& row : table.rows)
        rows.push_back({{"epsilon", row.epsilon}, {"tv", row.tv}});
    doc["rows"] = std::move(rows);
    doc["noise_floor"] = table.noise_floor;
    doc["n_top"] = table.n_top;
    return doc.dump();
}

EpsTable eps_table_from_json(const std::string& text) {
    return guarded_parse<EpsTable>(text, [](const ordered_json& doc) {
        EpsTable table;
        for (const auto& row : doc.at("rows"))
            table.rows.push_back(
                EpsRow{row.at("epsilon").get<double>(), row.at("tv").get<double>()});
        table.noise_floor = doc.at("noise_floor").get<double>();
        table.n_top = doc.at("n_top").get<std::int64_t>();
        return table;
    });
}

std::string to_json(const ReachReport& report) {
    ordered_json doc;
    doc["hits"] = report.hits;
    doc["replicas"] = report.replicas;
    doc["frequency"] = report.frequency;
    return doc.dump();
}

ReachReport reach_from_json(const std::string& text) {
    return guarded_parse<ReachReport>(text, [](const ordered_json& doc) {
        ReachReport report;
        report.hits = doc.at("hits").get<std::int64_t>();
        report.replicas = doc.at("replicas").get<int>();
        report.frequency = doc.at("frequency").get<double>();
        return report;
    });
}

std::string to_json(const IbmCompare& report) {
    ordered_json doc;
    doc["K"] = report.K;
    doc["replicas"] = report.replicas;
    doc["tv"] = report.tv;
    doc["noise_floor"] = report.noise_floor;
    return doc.dump();
}

IbmCompare ibm_compare_from_json(const std::string& text) {
    return guarded_parse<IbmCompare>(text, [](const ordered_json& doc) {
        IbmCompare report;
        report.K = doc.at("K").get<std::int64_t>();
        report.replicas = doc.at("replicas").get<int>();
        report.tv = doc.at("tv").get<double>();
        report.noise_floor = doc.at("noise_floor").get<double>();
        return report;
    });
}

std::string terminal_states_json(std::span<const State> states) {
    ordered_json doc;
    doc["states"] = states_to_json(states);
    return doc.dump();
}

std::vector<State> terminal_states_from_json(const std::string& text) {
    return guarded_parse<std::vector<State>>(
        text, [](const ordered_json& doc) { return states_from_json(doc.at("states")); });
}

KeyValues render_config(const RunConfig& cfg) {
    KeyValues kv;
    kv["b"] = format17(cfg.params.b);
    kv["d"] = format17(cfg.params.d);
    kv["c"] = format17(cfg.params.c);
    kv["B"] = format17(cfg.params.B);
    kv["r"] = format17(cfg.params.r);
    kv["D"] = format17(cfg.params.D);
    kv["C"] = format17(cfg.params.C);
    kv["m"] = format17(cfg.params.m);
    kv["epsilon"] = format17(cfg.params.epsilon);
    kv["process"] = to_string(cfg.process);
    if (cfg.process == ProcessKind::ibm) kv["K"] = std::to_string(cfg.K);
    kv["n0"] = std::to_string(cfg.n0);
    kv["h0"] = format17(cfg.h0);
    kv["T"] = format17(cfg.T);
    kv["replicas"] = std::to_string(cfg.replicas);
    if (cfg.has_seed) kv["seed"] = std::to_string(cfg.seed);
    kv["N_max"] = std::to_string(cfg.N_max);
    kv["sampler"] = cfg.sampler == JumpSampler::thinning ? "thinning" : "inversion";
    kv["max_events"] = std::to_string(cfg.max_events);
    kv["n_top"] = std::to_string(cfg.n_top);
    return kv;
}

std::string bundle_json(const OutputBundle& bundle) {
    ordered_json doc;
    doc["command"] = bundle.command;
    doc["version"] = version;
    ordered_json cfg;
    for (const auto& [key, value] : bundle.config_echo) cfg[key] = value;
    doc["config"] = std::move(cfg);
    doc["status"] = bundle.status;
    if (!bundle.message.empty()) doc["message"] = bundle.message;
    doc["payload_kind"] = bundle.payload_kind;
    doc["payload"] = ordered_json::parse(bundle.payload_json);
    return doc.dump(2) + "\n";
}

}  // namespace preypred
