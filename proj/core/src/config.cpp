#include "preypred/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

namespace preypred {

namespace {

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double x = std::stod(value, &pos);
        if (pos != value.size() || std::isnan(x)) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    }
}

std::int64_t to_int(const std::string& key, const std::string& value) {
    std::int64_t x = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
    return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("config: key '" + key + "' expects an unsigned integer, got '" +
                          value + "'");
    return x;
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(to_double(key, item));
    if (out.empty())
        throw ConfigError("config: key '" + key + "' expects a comma-separated list");
    return out;
}

void check(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: invalid JSON document: ") + e.what());
        }
        check(doc.is_object(), "config: JSON document must be a flat object");
        for (const auto& [key, value] : doc.items()) {
            if (value.is_string())
                kv[key] = value.get<std::string>();
            else if (value.is_boolean())
                kv[key] = value.get<bool>() ? "true" : "false";
            else if (value.is_number() || value.is_array()) {
                std::string rendered;
                if (value.is_array()) {
                    for (const auto& item : value) {
                        check(item.is_number(),
                              "config: key '" + key + "' has a non-numeric list entry");
                        if (!rendered.empty()) rendered += ',';
                        rendered += item.dump();
                    }
                } else {
                    rendered = value.dump();
                }
                kv[key] = rendered;
            } else {
                throw ConfigError("config: key '" + key + "' has an unsupported value type");
            }
        }
        return kv;
    }

    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::stringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            auto eq = token.find('=');
            check(eq != std::string::npos && eq > 0,
                  "config: expected key=value, got '" + token + "'");
            kv[token.substr(0, eq)] = token.substr(eq + 1);
        }
    }
    return kv;
}

RunConfig validate_config(const KeyValues& kv) {
    RunConfig cfg;
    bool seen_rate[7] = {};
    const char* rate_names[7] = {"b", "d", "c", "B", "r", "D", "C"};

    using Setter = std::function<void(const std::string&, const std::string&)>;
    std::map<std::string, Setter> setters;
    auto dbl = [&](double& slot) {
        return [&slot](const std::string& k, const std::string& v) { slot = to_double(k, v); };
    };
    setters["b"] = dbl(cfg.params.b);
    setters["d"] = dbl(cfg.params.d);
    setters["c"] = dbl(cfg.params.c);
    setters["B"] = dbl(cfg.params.B);
    setters["r"] = dbl(cfg.params.r);
    setters["D"] = dbl(cfg.params.D);
    setters["C"] = dbl(cfg.params.C);
    setters["m"] = dbl(cfg.params.m);
    setters["epsilon"] = dbl(cfg.params.epsilon);
    setters["h0"] = dbl(cfg.h0);
    setters["h0_b"] = dbl(cfg.h0_b);
    setters["T"] = dbl(cfg.T);
    setters["gamma"] = dbl(cfg.gamma);
    setters["grid_h"] = dbl(cfg.grid_h);
    setters["target_h_lo"] = dbl(cfg.target_h_lo);
    setters["target_h_hi"] = dbl(cfg.target_h_hi);
    setters["window_start"] = dbl(cfg.window_start);
    setters["window_end"] = dbl(cfg.window_end);
    setters["K"] = [&](const std::string& k, const std::string& v) { cfg.K = to_int(k, v); };
    setters["n0"] = [&](const std::string& k, const std::string& v) { cfg.n0 = to_int(k, v); };
    setters["n0_b"] = [&](const std::string& k, const std::string& v) {
        cfg.n0_b = to_int(k, v);
    };
    setters["replicas"] = [&](const std::string& k, const std::string& v) {
        cfg.replicas = static_cast<int>(to_int(k, v));
    };
    setters["N_max"] = [&](const std::string& k, const std::string& v) {
        cfg.N_max = to_int(k, v);
    };
    setters["n_top"] = [&](const std::string& k, const std::string& v) {
        cfg.n_top = to_int(k, v);
    };
    setters["grid_n"] = [&](const std::string& k, const std::string& v) {
        cfg.grid_n = to_int(k, v);
    };
    setters["grid_steps"] = [&](const std::string& k, const std::string& v) {
        cfg.grid_steps = to_int(k, v);
    };
    setters["target_n"] = [&](const std::string& k, const std::string& v) {
        cfg.target_n = to_int(k, v);
    };
    setters["seed"] = [&](const std::string& k, const std::string& v) {
        cfg.seed = to_uint(k, v);
        cfg.has_seed = true;
    };
    setters["max_events"] = [&](const std::string& k, const std::string& v) {
        cfg.max_events = to_uint(k, v);
    };
    setters["process"] = [&](const std::string& k, const std::string& v) {
        if (v == "pdmp")
            cfg.process = ProcessKind::pdmp;
        else if (v == "ibm")
            cfg.process = ProcessKind::ibm;
        else if (v == "averaged")
            cfg.process = ProcessKind::averaged;
        else
            throw ConfigError("config: key '" + k + "' must be pdmp, ibm or averaged");
    };
    setters["sampler"] = [&](const std::string& k, const std::string& v) {
        if (v == "thinning")
            cfg.sampler = JumpSampler::thinning;
        else if (v == "inversion")
            cfg.sampler = JumpSampler::inversion;
        else
            throw ConfigError("config: key '" + k + "' must be thinning or inversion");
    };
    setters["lyapunov"] = [&](const std::string& k, const std::string& v) {
        if (v == "V")
            cfg.lyapunov = Lyapunov::V;
        else if (v == "W")
            cfg.lyapunov = Lyapunov::W;
        else
            throw ConfigError("config: key '" + k + "' must be V or W");
    };
    setters["compare"] = [&](const std::string& k, const std::string& v) {
        if (v != "epsilon" && v != "ibm" && v != "ergodicity")
            throw ConfigError("config: key '" + k + "' must be epsilon, ibm or ergodicity");
        cfg.compare = v;
    };
    setters["hist"] = [&](const std::string& k, const std::string& v) {
        if (v == "true" || v == "1")
            cfg.hist = true;
        else if (v == "false" || v == "0")
            cfg.hist = false;
        else
            throw ConfigError("config: key '" + k + "' must be true or false");
    };
    setters["epsilons"] = [&](const std::string& k, const std::string& v) {
        cfg.epsilons = to_list(k, v);
    };
    setters["times"] = [&](const std::string& k, const std::string& v) {
        cfg.times = to_list(k, v);
    };

    for (const auto& [key, value] : kv) {
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("config: unknown key '" + key + "'");
        it->second(key, value);
        for (int i = 0; i < 7; ++i)
            if (key == rate_names[i]) seen_rate[i] = true;
    }
    for (int i = 0; i < 7; ++i)
        check(seen_rate[i],
              std::string("config: key '") + rate_names[i] + "' is required (demographic rate)");

    try {
        cfg.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    check(cfg.replicas >= 1, "config: key 'replicas' must be >= 1");
    check(cfg.N_max >= 2, "config: key 'N_max' must be >= 2");
    check(cfg.n_top >= 1, "config: key 'n_top' must be >= 1");
    check(cfg.max_events >= 1, "config: key 'max_events' must be >= 1");
    check(cfg.process != ProcessKind::ibm || cfg.K >= 1,
          "config: key 'K' must be >= 1 for process=ibm");
    return cfg;
}

RunConfig parse_config(const std::string& text) { return validate_config(parse_key_values(text)); }

}  // namespace preypred
