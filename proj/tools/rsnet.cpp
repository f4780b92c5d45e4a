// rsnet: generate, simulate and analyse random resistive-switch networks.
//
// Exit codes: 0 success (including partial sweep failures), 1 configuration
// error, 2 I/O error, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rsnet/analysis.hpp"
#include "rsnet/config.hpp"
#include "rsnet/error.hpp"
#include "rsnet/harness.hpp"
#include "rsnet/io.hpp"
#include "rsnet/solver.hpp"
#include "rsnet/topology.hpp"

namespace fs = std::filesystem;
using namespace rsnet;

namespace {

enum Exit { kOk = 0, kConfig = 1, kIo = 2, kNumerical = 3 };

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> workers;
    bool heatmap = false;
    bool no_center = false;
};

RunConfig resolve(const CommonFlags& f) {
    RunConfig cfg = f.config.empty() ? parse_run_config(Json::object()) : load_run_config(f.config);
    if (f.seed) cfg.seed = *f.seed;
    if (f.out) cfg.out = *f.out;
    if (f.workers) cfg.workers = *f.workers;
    if (f.heatmap) cfg.heatmap = true;
    if (f.no_center) cfg.settings.center = false;
    return cfg;
}

void write_manifest(const RunConfig& cfg, const std::string& command, Json extra) {
    Json m{{"tool", "rsnet"}, {"version", RSNET_VERSION}, {"command", command}, {"config", to_json(cfg)}};
    for (auto& [k, v] : extra.items()) m[k] = v;
    write_file_atomic(cfg.out / (command + ".manifest.json"), m.dump(2) + "\n");
}

int cmd_generate(const CommonFlags& flags, const std::string& file) {
    const RunConfig cfg = resolve(flags);
    const auto& s = cfg.settings;
    GenerateOptions opt;
    opt.shape = {cfg.cell.alpha, cfg.cell.beta};
    opt.xi = cfg.cell.xi;
    opt.edge_count = s.edge_count;
    opt.input = s.input;
    opt.ground = s.ground;
    opt.ranges = s.ranges;
    const auto topo = generate_network(build_grid(s.interface_dim, s.subdivision), opt, cfg.seed);
    const fs::path path = file.empty() ? cfg.out / "topology.json" : fs::path(file);
    write_topology(path, topo);
    write_manifest(cfg, "generate", {{"seed", cfg.seed}, {"topology", path.string()}});
    std::cout << "edges " << topo.edges.size() << " (generated " << topo.generated_edges << ", added "
              << topo.edges.size() - topo.generated_edges << ")\n"
              << "nodes " << topo.grid.node_count() << "\n"
              << "interface nodes " << topo.grid.interface_count() << "\n"
              << "connected " << (is_connected(topo) ? "yes" : "no") << "\n"
              << "wrote " << path.string() << "\n";
    return kOk;
}

int cmd_simulate(const CommonFlags& flags, const std::string& topology_file, std::optional<double> amplitude) {
    RunConfig cfg = resolve(flags);
    if (amplitude) cfg.cell.amplitude = *amplitude;
    const auto topo = read_topology(topology_file);
    const auto trace = simulate(topo, cfg.waveform().function(), cfg.settings.solver);
    const auto e = energy(trace);

    Json summary{{"topology", topology_file},
                 {"steps", trace.steps()},
                 {"dt", trace.dt},
                 {"amplitude", cfg.cell.amplitude},
                 {"frequency", cfg.settings.frequency},
                 {"energy_joules", e.energy_joules},
                 {"mean_power", e.mean_power},
                 {"switching_events", trace.switching_events},
                 {"max_residual", trace.max_residual}};
    write_file_atomic(cfg.out / "trace.csv", trace_csv(trace));
    write_file_atomic(cfg.out / "summary.json", summary.dump(2) + "\n");
    write_manifest(cfg, "simulate", {{"topology", topology_file}, {"topology_seed", topo.seed}});
    std::cout << "steps " << trace.steps() << "\nenergy " << format_number(e.energy_joules) << " J\n"
              << "switching events " << trace.switching_events << "\nwrote " << (cfg.out / "trace.csv").string()
              << "\n";
    return kOk;
}

int cmd_analyze(const CommonFlags& flags, const std::string& trace_file, const std::vector<std::size_t>& readout) {
    const RunConfig cfg = resolve(flags);
    const auto trace = parse_trace_csv(read_file(trace_file));
    Eigen::MatrixXd x = trace.interface_voltages;
    std::string signals = "interface";
    if (!readout.empty()) {
        if (readout.size() != 2 || readout[0] < 1 || readout[1] < 1)
            throw ConfigError("--readout takes two 1-based interface posts");
        x = differential_readout(trace, readout[0] - 1, readout[1] - 1);
        signals = "differential";
    }
    const auto h = entropy(x, cfg.settings.center);
    const auto e = energy(trace);
    Json out{{"trace", trace_file},
             {"signals", signals},
             {"centered", cfg.settings.center},
             {"n_signals", h.n_signals},
             {"entropy_bits", h.entropy_bits},
             {"degenerate", h.degenerate},
             {"spectrum", h.spectrum},
             {"energy_joules", e.energy_joules},
             {"duration", e.duration},
             {"mean_power", e.mean_power}};
    write_file_atomic(cfg.out / "analysis.json", out.dump(2) + "\n");
    std::cout << "entropy " << format_number(h.entropy_bits) << " bits over " << h.n_signals << " signals"
              << (h.degenerate ? " (degenerate)" : "") << "\nenergy " << format_number(e.energy_joules) << " J\n";
    return kOk;
}

void write_heatmaps(const SweepConfig& sw, const SweepResult& res, const fs::path& dir, const std::string& label) {
    for (double xi : sw.xis)
        for (double v : sw.amplitudes) {
            std::vector<double> grid(sw.alphas.size() * sw.betas.size(), std::nan(""));
            for (const auto& c : res.aggregates) {
                if (c.xi != xi || c.v != v || c.trials_ok == 0) continue;
                for (std::size_t ai = 0; ai < sw.alphas.size(); ++ai)
                    for (std::size_t bi = 0; bi < sw.betas.size(); ++bi)
                        if (sw.alphas[ai] == c.alpha && sw.betas[bi] == c.beta)
                            grid[bi * sw.alphas.size() + ai] = c.mean_entropy;
            }
            const std::string tag = "xi" + format_number(xi) + "_v" + format_number(v);
            write_file_atomic(dir / ("entropy_" + tag + ".svg"),
                              heatmap_svg(sw.alphas, sw.betas, grid,
                                          label + " mean H, xi=" + format_number(xi) + ", v=" + format_number(v)));
        }
    write_file_atomic(dir / "energy_entropy.svg", energy_entropy_svg(res.aggregates, label + " H vs log10(E)"));
}

int run_sweep_command(const RunConfig& cfg, const SweepConfig& sw, const std::string& command) {
    const SweepResult res = run_sweep(sw);
    write_file_atomic(cfg.out / "records.csv", records_csv(res.records));
    write_file_atomic(cfg.out / "aggregate.csv", aggregates_csv(res.aggregates));
    Json seeds = Json::array();
    std::size_t failed = 0;
    for (const auto& r : res.records) {
        seeds.push_back(r.seed);
        if (!r.ok()) ++failed;
    }
    write_manifest(cfg, command, {{"base_seed", sw.base_seed}, {"records", res.records.size()}, {"seeds", seeds}});
    if (cfg.heatmap) {
        try {
            write_heatmaps(sw, res, cfg.out / "heatmaps", command);
        } catch (const std::exception& e) {
            std::cerr << "warning: heatmap rendering failed: " << e.what() << "\n";
        }
    }
    std::cout << "records " << res.records.size() << " (failed " << failed << ")\ncells " << res.aggregates.size()
              << "\nwrote " << (cfg.out / "records.csv").string() << "\n";
    if (failed == res.records.size()) {
        std::cerr << "error: every cell failed; first error: " << res.records.front().error << "\n";
        return kNumerical;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random resistive-switch network simulator"};
    app.require_subcommand(1);
    CommonFlags flags;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
        sub->add_option("--seed", flags.seed, "Seed (base seed for sweeps)");
        sub->add_option("--out", flags.out, "Output directory");
        sub->add_option("--workers", flags.workers, "Worker threads");
        sub->add_flag("--heatmap", flags.heatmap, "Render SVG heatmaps (sweep, hierarchy)");
        sub->add_flag("--no-center", flags.no_center, "Use the uncentered X^T X");
    };

    std::string topology_out;
    auto* gen = app.add_subcommand("generate", "Generate a network topology");
    add_common(gen);
    gen->add_option("--file", topology_out, "Topology output path (default <out>/topology.json)");

    std::string topology_in;
    std::optional<double> amplitude;
    auto* sim = app.add_subcommand("simulate", "Simulate a topology under the configured drive");
    add_common(sim);
    sim->add_option("--topology", topology_in, "Topology file from 'generate'")->required();
    sim->add_option("--amplitude", amplitude, "Drive amplitude [V]");

    std::string trace_in;
    std::vector<std::size_t> readout;
    auto* ana = app.add_subcommand("analyze", "Entropy and energy of a trace CSV");
    add_common(ana);
    ana->add_option("--trace", trace_in, "Trace CSV from 'simulate'")->required();
    ana->add_option("--readout", readout, "Differential readout posts a b (1-based)")->expected(2);

    auto* swp = app.add_subcommand("sweep", "Single-network (alpha, beta, xi, v) sweep");
    add_common(swp);
    auto* hier = app.add_subcommand("hierarchy", "Independent-network hierarchy runs");
    add_common(hier);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*gen) return cmd_generate(flags, topology_out);
        if (*sim) return cmd_simulate(flags, topology_in, amplitude);
        if (*ana) return cmd_analyze(flags, trace_in, readout);
        if (*swp) {
            const RunConfig cfg = resolve(flags);
            return run_sweep_command(cfg, sweep_config(cfg), "sweep");
        }
        if (*hier) {
            const RunConfig cfg = resolve(flags);
            return run_sweep_command(cfg, hierarchy_sweep_config(cfg), "hierarchy");
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const DataError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kIo;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kOk;
}
