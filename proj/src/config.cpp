#include "rsnet/config.hpp"

#include <initializer_list>
#include <string_view>

#include "rsnet/error.hpp"

namespace rsnet {

namespace {

void check_keys(const Json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string(where.empty() ? "config" : where) + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError("unknown key '" + (where.empty() ? key : std::string(where) + "." + key) + "'");
    }
}

std::string path_of(std::string_view where, std::string_view key) {
    return where.empty() ? std::string(key) : std::string(where) + "." + std::string(key);
}

template <class T>
void read(const Json& obj, std::string_view where, std::string_view key, T& dst) {
    const std::string k(key);
    if (!obj.contains(k)) return;
    try {
        dst = obj.at(k).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("invalid value for '" + path_of(where, key) + "'");
    }
}

template <class T>
void read_optional(const Json& obj, std::string_view where, std::string_view key, std::optional<T>& dst) {
    if (!obj.contains(std::string(key))) return;
    T v{};
    read(obj, where, key, v);
    dst = v;
}

// Interface posts are 1-based in documents.
std::size_t post_index(const Json& obj, std::string_view where, std::string_view key, std::size_t count) {
    long v = 0;
    read(obj, where, key, v);
    if (v < 1 || static_cast<std::size_t>(v) > count)
        throw ConfigError("'" + path_of(where, key) + "' must be an interface post in 1.." + std::to_string(count));
    return static_cast<std::size_t>(v - 1);
}

void read_interval(const Json& obj, std::string_view where, std::string_view key, Interval& iv) {
    const std::string k(key);
    if (!obj.contains(k)) return;
    const auto& v = obj.at(k);
    if (v.is_number()) {
        iv.min = iv.max = v.get<double>();
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        iv = {v[0].get<double>(), v[1].get<double>()};
    } else {
        throw ConfigError("invalid value for '" + path_of(where, key) + "' (number or [min, max])");
    }
}

template <class F>
void guarded(std::string_view key, F&& f) {
    try {
        f();
    } catch (const ParameterError& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

std::vector<double> read_axis(const Json& obj, std::string_view where, std::string_view key,
                              std::vector<double> fallback) {
    read(obj, where, key, fallback);
    if (fallback.empty()) throw ConfigError("'" + path_of(where, key) + "' must not be empty");
    return fallback;
}

}  // namespace

RunConfig parse_run_config(const Json& doc) {
    check_keys(doc, "", {"seed", "workers", "out", "heatmap", "grid", "device", "network", "waveform", "solver",
                         "analysis", "sweep", "hierarchy"});
    RunConfig cfg;
    read(doc, "", "seed", cfg.seed);
    read(doc, "", "workers", cfg.workers);
    std::string out = cfg.out.string();
    read(doc, "", "out", out);
    cfg.out = out;
    read(doc, "", "heatmap", cfg.heatmap);
    auto& s = cfg.settings;

    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        check_keys(g, "grid", {"interface_dim", "subdivision"});
        read(g, "grid", "interface_dim", s.interface_dim);
        read(g, "grid", "subdivision", s.subdivision);
        if (s.interface_dim < 2) throw ConfigError("'grid.interface_dim' must be >= 2");
    }
    const std::size_t posts = s.interface_dim * s.interface_dim;

    if (doc.contains("device")) {
        const auto& d = doc["device"];
        check_keys(d, "device", {"nominal", "variation", "ranges", "decay_mode"});
        DeviceParams nominal;
        double variation = 0.5;
        if (d.contains("nominal")) {
            const auto& n = d["nominal"];
            check_keys(n, "device.nominal", {"epsilon", "theta", "gamma", "delta", "lambda", "eta", "tau", "th_low",
                                             "th_high", "g_floor"});
            for (auto [key, field] : {std::pair{"epsilon", &nominal.epsilon}, {"theta", &nominal.theta},
                                      {"gamma", &nominal.gamma}, {"delta", &nominal.delta},
                                      {"lambda", &nominal.lambda}, {"eta", &nominal.eta}, {"tau", &nominal.tau},
                                      {"th_low", &nominal.th_low}, {"th_high", &nominal.th_high},
                                      {"g_floor", &nominal.g_floor}})
                read(n, "device.nominal", key, *field);
            guarded("device.nominal", [&] { validate(nominal); });
        }
        read(d, "device", "variation", variation);
        guarded("device.variation", [&] { s.ranges = ParamRanges::around(nominal, variation); });
        if (d.contains("ranges")) {
            const auto& r = d["ranges"];
            check_keys(r, "device.ranges", {"epsilon", "theta", "gamma", "delta", "lambda", "eta", "tau", "th_low",
                                            "th_high", "g_floor"});
            auto& R = s.ranges;
            for (auto [key, field] : {std::pair{"epsilon", &R.epsilon}, {"theta", &R.theta}, {"gamma", &R.gamma},
                                      {"delta", &R.delta}, {"lambda", &R.lambda}, {"eta", &R.eta}, {"tau", &R.tau},
                                      {"th_low", &R.th_low}, {"th_high", &R.th_high}, {"g_floor", &R.g_floor}})
                read_interval(r, "device.ranges", key, *field);
        }
        guarded("device.ranges", [&] { validate(s.ranges); });
        if (d.contains("decay_mode")) {
            std::string mode;
            read(d, "device", "decay_mode", mode);
            if (mode == "eq3" || mode == "state_dependent")
                s.solver.decay = DecayMode::StateDependent;
            else if (mode == "eq2" || mode == "plain")
                s.solver.decay = DecayMode::Plain;
            else
                throw ConfigError("'device.decay_mode' must be eq3 or eq2");
        }
    }

    if (doc.contains("network")) {
        const auto& n = doc["network"];
        check_keys(n, "network", {"alpha", "beta", "xi", "edge_count", "input", "ground"});
        read(n, "network", "alpha", cfg.cell.alpha);
        read(n, "network", "beta", cfg.cell.beta);
        read(n, "network", "xi", cfg.cell.xi);
        read_optional(n, "network", "edge_count", s.edge_count);
        if (n.contains("input")) s.input = post_index(n, "network", "input", posts);
        if (n.contains("ground")) s.ground = post_index(n, "network", "ground", posts);
        guarded("network.alpha/beta", [&] { validate(BetaShape{cfg.cell.alpha, cfg.cell.beta}); });
        if (!(cfg.cell.xi >= 1)) throw ConfigError("'network.xi' must be >= 1");
        if (s.input.value_or(0) == s.ground.value_or(posts - 1))
            throw ConfigError("'network.input' and 'network.ground' must differ");
    }

    if (doc.contains("waveform")) {
        const auto& w = doc["waveform"];
        check_keys(w, "waveform", {"kind", "amplitude", "frequency"});
        std::string kind = "sine";
        read(w, "waveform", "kind", kind);
        if (kind == "sine")
            s.waveform = WaveformSpec::Kind::Sine;
        else if (kind == "constant")
            s.waveform = WaveformSpec::Kind::Constant;
        else
            throw ConfigError("'waveform.kind' must be sine or constant");
        read(w, "waveform", "amplitude", cfg.cell.amplitude);
        read(w, "waveform", "frequency", s.frequency);
        if (!std::isfinite(cfg.cell.amplitude)) throw ConfigError("'waveform.amplitude' must be finite");
        if (!(s.frequency >= 0)) throw ConfigError("'waveform.frequency' must be >= 0");
    }

    if (doc.contains("solver")) {
        const auto& v = doc["solver"];
        check_keys(v, "solver", {"dt", "duration", "fixed_point", "max_iterations", "tolerance", "decimation"});
        read(v, "solver", "dt", s.solver.dt);
        read(v, "solver", "duration", s.solver.duration);
        read(v, "solver", "fixed_point", s.solver.fixed_point);
        read(v, "solver", "max_iterations", s.solver.max_iterations);
        read(v, "solver", "tolerance", s.solver.iteration_tolerance);
        read(v, "solver", "decimation", s.solver.decimation);
        guarded("solver", [&] { validate(s.solver); });
    }

    if (doc.contains("analysis")) {
        const auto& a = doc["analysis"];
        check_keys(a, "analysis", {"center"});
        read(a, "analysis", "center", s.center);
    }

    if (doc.contains("hierarchy")) {
        const auto& h = doc["hierarchy"];
        check_keys(h, "hierarchy", {"networks", "readout", "trials"});
        read(h, "hierarchy", "networks", cfg.hierarchy.networks);
        read(h, "hierarchy", "trials", cfg.trials);
        if (h.contains("readout")) {
            const auto& r = h["readout"];
            if (!r.is_array() || r.size() != 2) throw ConfigError("'hierarchy.readout' must be [a, b]");
            const Json pair{{"a", r[0]}, {"b", r[1]}};
            cfg.hierarchy.readout_a = post_index(pair, "hierarchy.readout", "a", posts);
            cfg.hierarchy.readout_b = post_index(pair, "hierarchy.readout", "b", posts);
        }
        guarded("hierarchy", [&] { validate(cfg.hierarchy, posts); });
        if (cfg.trials < 1) throw ConfigError("'hierarchy.trials' must be >= 1");
    }

    if (doc.contains("sweep")) {
        const auto& w = doc["sweep"];
        check_keys(w, "sweep", {"alphas", "betas", "xis", "amplitudes", "trials"});
        SweepConfig sw;
        sw.alphas = read_axis(w, "sweep", "alphas", sw.alphas);
        sw.betas = read_axis(w, "sweep", "betas", sw.betas);
        sw.xis = read_axis(w, "sweep", "xis", sw.xis);
        sw.amplitudes = read_axis(w, "sweep", "amplitudes", sw.amplitudes);
        read(w, "sweep", "trials", sw.trials);
        cfg.sweep = sw;
    }

    guarded("config", [&] { validate(s); });
    if (cfg.sweep) {
        auto probe = *cfg.sweep;
        probe.settings = s;
        guarded("sweep", [&] { validate(probe); });
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    Json doc;
    try {
        doc = Json::parse(text, nullptr, true, true);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_run_config(doc);
}

namespace {

Json ranges_json(const ParamRanges& r) {
    Json j;
    for (auto [key, iv] : {std::pair{"epsilon", r.epsilon}, {"theta", r.theta}, {"gamma", r.gamma},
                           {"delta", r.delta}, {"lambda", r.lambda}, {"eta", r.eta}, {"tau", r.tau},
                           {"th_low", r.th_low}, {"th_high", r.th_high}, {"g_floor", r.g_floor}})
        j[key] = Json::array({iv.min, iv.max});
    return j;
}

}  // namespace

Json to_json(const RunConfig& cfg) {
    const auto& s = cfg.settings;
    const std::size_t posts = s.interface_dim * s.interface_dim;
    Json network{{"alpha", cfg.cell.alpha},
                 {"beta", cfg.cell.beta},
                 {"xi", cfg.cell.xi},
                 {"input", s.input.value_or(0) + 1},
                 {"ground", s.ground.value_or(posts - 1) + 1}};
    if (s.edge_count) network["edge_count"] = *s.edge_count;
    Json j{{"seed", cfg.seed},
           {"grid", {{"interface_dim", s.interface_dim}, {"subdivision", s.subdivision}}},
           {"device",
            {{"ranges", ranges_json(s.ranges)},
             {"decay_mode", s.solver.decay == DecayMode::StateDependent ? "eq3" : "eq2"}}},
           {"network", network},
           {"waveform",
            {{"kind", s.waveform == WaveformSpec::Kind::Sine ? "sine" : "constant"},
             {"amplitude", cfg.cell.amplitude},
             {"frequency", s.frequency}}},
           {"solver",
            {{"dt", s.solver.dt},
             {"duration", s.solver.duration},
             {"fixed_point", s.solver.fixed_point},
             {"max_iterations", s.solver.max_iterations},
             {"tolerance", s.solver.iteration_tolerance},
             {"decimation", s.solver.decimation}}},
           {"analysis", {{"center", s.center}}},
           {"hierarchy",
            {{"networks", cfg.hierarchy.networks},
             {"readout", Json::array({cfg.hierarchy.readout_a + 1, cfg.hierarchy.readout_b + 1})},
             {"trials", cfg.trials}}}};
    if (cfg.sweep)
        j["sweep"] = {{"alphas", cfg.sweep->alphas},
                      {"betas", cfg.sweep->betas},
                      {"xis", cfg.sweep->xis},
                      {"amplitudes", cfg.sweep->amplitudes},
                      {"trials", cfg.sweep->trials}};
    return j;
}

SweepConfig sweep_config(const RunConfig& cfg) {
    SweepConfig sw = cfg.sweep.value_or(SweepConfig{});
    sw.settings = cfg.settings;
    sw.base_seed = cfg.seed;
    sw.workers = cfg.workers;
    sw.hierarchy.reset();
    return sw;
}

SweepConfig hierarchy_sweep_config(const RunConfig& cfg) {
    SweepConfig sw;
    if (cfg.sweep) {
        sw = *cfg.sweep;
    } else {
        sw.alphas = {cfg.cell.alpha};
        sw.betas = {cfg.cell.beta};
        sw.xis = {cfg.cell.xi};
        sw.amplitudes = {cfg.cell.amplitude};
        sw.trials = cfg.trials;
    }
    sw.settings = cfg.settings;
    sw.base_seed = cfg.seed;
    sw.workers = cfg.workers;
    sw.hierarchy = cfg.hierarchy;
    return sw;
}

}  // namespace rsnet
