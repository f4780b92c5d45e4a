#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "rsnet/analysis.hpp"
#include "rsnet/config.hpp"
#include "rsnet/error.hpp"
#include "rsnet/harness.hpp"
#include "rsnet/io.hpp"

namespace py = pybind11;
using namespace rsnet;

namespace {

DecayMode decay_mode(const std::string& s) {
    if (s == "eq3") return DecayMode::StateDependent;
    if (s == "eq2") return DecayMode::Plain;
    throw ParameterError("decay mode must be 'eq3' or 'eq2', got '" + s + "'");
}

WaveformSpec::Kind waveform_kind(const std::string& s) {
    if (s == "sine") return WaveformSpec::Kind::Sine;
    if (s == "constant") return WaveformSpec::Kind::Constant;
    throw ParameterError("waveform kind must be 'sine' or 'constant', got '" + s + "'");
}

RunConfig config_from(const std::string& json) { return parse_run_config(Json::parse(json.empty() ? "{}" : json)); }

py::dict record_dict(const SweepRecord& r) {
    py::dict d;
    d["alpha"] = r.alpha;
    d["beta"] = r.beta;
    d["xi"] = r.xi;
    d["v"] = r.v;
    d["trial"] = r.trial;
    d["seed"] = r.seed;
    d["entropy_bits"] = r.entropy_bits;
    d["energy_joules"] = r.energy_joules;
    d["switching_events"] = r.switching_events;
    d["edge_count"] = r.edge_count;
    d["degenerate"] = r.degenerate;
    d["error"] = r.error;
    return d;
}

py::dict aggregate_dict(const CellAggregate& c) {
    py::dict d;
    d["alpha"] = c.alpha;
    d["beta"] = c.beta;
    d["xi"] = c.xi;
    d["v"] = c.v;
    d["trials_ok"] = c.trials_ok;
    d["trials_failed"] = c.trials_failed;
    d["mean_entropy"] = c.mean_entropy;
    d["sd_entropy"] = c.sd_entropy;
    d["mean_energy"] = c.mean_energy;
    d["sd_energy"] = c.sd_energy;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Resistive-switch network simulator core";
    m.attr("__version__") = RSNET_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<GenerationError>(m, "GenerationError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    // Malformed JSON from the config parser.
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<DeviceParams>(m, "DeviceParams")
        .def(py::init<>())
        .def_readwrite("epsilon", &DeviceParams::epsilon)
        .def_readwrite("theta", &DeviceParams::theta)
        .def_readwrite("gamma", &DeviceParams::gamma)
        .def_readwrite("delta", &DeviceParams::delta)
        .def_readwrite("lambda_", &DeviceParams::lambda)
        .def_readwrite("eta", &DeviceParams::eta)
        .def_readwrite("tau", &DeviceParams::tau)
        .def_readwrite("th_low", &DeviceParams::th_low)
        .def_readwrite("th_high", &DeviceParams::th_high)
        .def_readwrite("g_floor", &DeviceParams::g_floor)
        .def("__repr__", [](const DeviceParams& p) { return "DeviceParams(" + to_json(p).dump() + ")"; });

    py::class_<DeviceState>(m, "DeviceState")
        .def(py::init<>())
        .def(py::init([](double w_prime, int w) { return DeviceState{w_prime, w}; }), py::arg("w_prime"),
             py::arg("w") = 0)
        .def_readwrite("w_prime", &DeviceState::w_prime)
        .def_readwrite("w", &DeviceState::w)
        .def("__repr__", [](const DeviceState& s) {
            return "DeviceState(w_prime=" + format_number(s.w_prime) + ", w=" + std::to_string(s.w) + ")";
        });

    m.def("conductance", &conductance, py::arg("w"), py::arg("volts"), py::arg("params") = DeviceParams{});
    m.def("current", &current, py::arg("w"), py::arg("volts"), py::arg("params") = DeviceParams{});
    m.def(
        "step_internal_state",
        [](DeviceState s, double v, double dt, const DeviceParams& p, const std::string& mode) {
            return step_internal_state(s, v, dt, p, decay_mode(mode));
        },
        py::arg("state"), py::arg("volts"), py::arg("dt"), py::arg("params") = DeviceParams{},
        py::arg("decay") = "eq3");
    m.def("apply_hysteresis", &apply_hysteresis, py::arg("state"), py::arg("params") = DeviceParams{});

    py::class_<Grid>(m, "Grid")
        .def_property_readonly("interface_dim", &Grid::interface_dim)
        .def_property_readonly("subdivision", &Grid::subdivision)
        .def_property_readonly("side", &Grid::side)
        .def_property_readonly("node_count", &Grid::node_count)
        .def_property_readonly("interface_nodes", &Grid::interface_nodes)
        .def("position", [](const Grid& g, NodeId n) {
            const auto p = g.position(n);
            return py::make_tuple(p.x, p.y);
        });
    m.def("build_grid", &build_grid, py::arg("interface_dim") = 4, py::arg("subdivision") = 1);

    py::class_<NetworkTopology>(m, "Topology")
        .def_readonly("grid", &NetworkTopology::grid)
        .def_readonly("input", &NetworkTopology::input)
        .def_readonly("ground", &NetworkTopology::ground)
        .def_readonly("seed", &NetworkTopology::seed)
        .def_readonly("generated_edges", &NetworkTopology::generated_edges)
        .def_property_readonly("edge_count", [](const NetworkTopology& t) { return t.edges.size(); })
        .def_property_readonly("edges",
                               [](const NetworkTopology& t) {
                                   py::list out;
                                   for (const auto& e : t.edges) out.append(py::make_tuple(e.a, e.b));
                                   return out;
                               })
        .def("edge_params", [](const NetworkTopology& t, std::size_t k) { return t.edges.at(k).params; })
        .def("edge_lengths", &edge_lengths)
        .def("is_connected", &is_connected)
        .def("to_json", [](const NetworkTopology& t) { return to_json(t).dump(2); })
        .def_static("from_json", [](const std::string& s) { return topology_from_json(Json::parse(s)); })
        .def("save", [](const NetworkTopology& t, const std::string& path) { write_topology(path, t); })
        .def_static("load", [](const std::string& path) { return read_topology(path); });

    m.def(
        "generate_network",
        [](double alpha, double beta, double xi, std::uint64_t seed, std::size_t interface_dim,
           std::size_t subdivision, std::optional<std::size_t> edge_count) {
            GenerateOptions o;
            o.shape = {alpha, beta};
            o.xi = xi;
            o.edge_count = edge_count;
            return generate_network(build_grid(interface_dim, subdivision), o, seed);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("xi") = 4.0, py::arg("seed") = 1, py::arg("interface_dim") = 4,
        py::arg("subdivision") = 1, py::arg("edge_count") = py::none());

    py::class_<SimulationTrace>(m, "Trace")
        .def_readonly("times", &SimulationTrace::times)
        .def_readonly("interface_voltages", &SimulationTrace::interface_voltages)
        .def_readonly("source_current", &SimulationTrace::source_current)
        .def_readonly("applied_voltage", &SimulationTrace::applied_voltage)
        .def_readonly("switching_events", &SimulationTrace::switching_events)
        .def_readonly("dt", &SimulationTrace::dt)
        .def_readonly("max_residual", &SimulationTrace::max_residual)
        .def_property_readonly("steps", &SimulationTrace::steps)
        .def("to_csv", &trace_csv);

    m.def(
        "simulate",
        [](const NetworkTopology& t, double amplitude, double frequency, const std::string& kind, double dt,
           double duration, const std::string& decay, bool fixed_point) {
            SolverOptions opt;
            opt.dt = dt;
            opt.duration = duration;
            opt.decay = decay_mode(decay);
            opt.fixed_point = fixed_point;
            const WaveformSpec w{waveform_kind(kind), amplitude, frequency};
            py::gil_scoped_release release;
            return simulate(t, w.function(), opt);
        },
        py::arg("topology"), py::arg("amplitude") = 1.0, py::arg("frequency") = 5.0, py::arg("kind") = "sine",
        py::arg("dt") = 1e-3, py::arg("duration") = 1.0, py::arg("decay") = "eq3", py::arg("fixed_point") = false);

    m.def(
        "entropy",
        [](const Eigen::MatrixXd& x, bool center) {
            const auto r = entropy(x, center);
            py::dict d;
            d["entropy_bits"] = r.entropy_bits;
            d["spectrum"] = r.spectrum;
            d["n_signals"] = r.n_signals;
            d["degenerate"] = r.degenerate;
            return d;
        },
        py::arg("signals"), py::arg("center") = true);
    m.def(
        "energy",
        [](const SimulationTrace& t) {
            const auto e = energy(t);
            py::dict d;
            d["energy_joules"] = e.energy_joules;
            d["duration"] = e.duration;
            d["mean_power"] = e.mean_power;
            return d;
        },
        py::arg("trace"));
    m.def("differential_readout", &differential_readout, py::arg("trace"), py::arg("node_a"), py::arg("node_b"));

    // Experiment entry points take a JSON config document in the CLI schema.
    m.def(
        "run_single",
        [](double alpha, double beta, double xi, double amplitude, std::uint64_t seed, const std::string& config) {
            const auto cfg = config_from(config);
            py::gil_scoped_release release;
            const auto r = run_single(cfg.settings, {alpha, beta, xi, amplitude}, seed);
            py::gil_scoped_acquire acquire;
            return record_dict(r);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("xi"), py::arg("amplitude"), py::arg("seed") = 1,
        py::arg("config") = "");
    m.def(
        "run_hierarchy",
        [](double alpha, double beta, double xi, double amplitude, std::uint64_t seed, const std::string& config,
           unsigned workers) {
            const auto cfg = config_from(config);
            py::gil_scoped_release release;
            const auto r = run_hierarchy(cfg.settings, cfg.hierarchy, {alpha, beta, xi, amplitude}, seed, workers);
            py::gil_scoped_acquire acquire;
            return record_dict(r);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("xi"), py::arg("amplitude"), py::arg("seed") = 1,
        py::arg("config") = "", py::arg("workers") = 1);
    m.def(
        "run_sweep",
        [](const std::string& config, bool hierarchy) {
            const auto cfg = config_from(config);
            const auto sw = hierarchy ? hierarchy_sweep_config(cfg) : sweep_config(cfg);
            SweepResult res;
            {
                py::gil_scoped_release release;
                res = run_sweep(sw);
            }
            py::list records, cells;
            for (const auto& r : res.records) records.append(record_dict(r));
            for (const auto& c : res.aggregates) cells.append(aggregate_dict(c));
            py::dict d;
            d["records"] = records;
            d["aggregates"] = cells;
            d["records_csv"] = records_csv(res.records);
            d["aggregates_csv"] = aggregates_csv(res.aggregates);
            return d;
        },
        py::arg("config") = "", py::arg("hierarchy") = false);
}
