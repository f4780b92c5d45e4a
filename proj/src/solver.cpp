#include "rsnet/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rsnet/error.hpp"

namespace rsnet {

double WaveformSpec::operator()(double t) const {
    switch (kind) {
        case Kind::Constant:
            return amplitude;
        case Kind::Sine:
            return amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
    }
    return 0.0;
}

MnaAssembler::MnaAssembler(const NetworkTopology& t)
    : topology_(&t), row_of_node_(t.grid.node_count(), -1) {
    const NodeId gnd = t.ground_node();
    const auto active = reachable_from(t, gnd);
    if (!active[t.input_node()]) throw NumericalError("assemble: input is not connected to ground");
    long row = 0;
    for (NodeId n = 0; n < active.size(); ++n)
        if (active[n] && n != gnd) row_of_node_[n] = row++;
    active_count_ = static_cast<std::size_t>(row) + 1;
}

LinearSystem MnaAssembler::assemble(std::span<const double> g, double v_in) const {
    const auto& t = *topology_;
    if (g.size() != t.edges.size()) throw ParameterError("assemble: one conductance per edge required");
    if (!std::isfinite(v_in)) throw ParameterError("assemble: non-finite source voltage");

    const long dim = static_cast<long>(active_count_);  // (active - 1) voltages + 1 current
    LinearSystem sys;
    sys.matrix = Eigen::MatrixXd::Zero(dim, dim);
    sys.rhs = Eigen::VectorXd::Zero(dim);
    sys.row_of_node = row_of_node_;
    sys.source_row = dim - 1;

    for (std::size_t k = 0; k < t.edges.size(); ++k) {
        const long ra = row_of_node_[t.edges[k].a];
        const long rb = row_of_node_[t.edges[k].b];
        const double gk = g[k];
        if (ra >= 0) sys.matrix(ra, ra) += gk;
        if (rb >= 0) sys.matrix(rb, rb) += gk;
        if (ra >= 0 && rb >= 0) {
            sys.matrix(ra, rb) -= gk;
            sys.matrix(rb, ra) -= gk;
        }
    }
    // Ideal source between input (+) and ground; the auxiliary unknown is the
    // current leaving the input node through the source.
    const long rin = row_of_node_[t.input_node()];
    sys.matrix(rin, sys.source_row) = 1.0;
    sys.matrix(sys.source_row, rin) = 1.0;
    sys.rhs(sys.source_row) = v_in;
    return sys;
}

std::vector<double> edge_conductances(const NetworkTopology& t, std::span<const DeviceState> states,
                                      std::span<const double> branch) {
    if (states.size() != t.edges.size() || branch.size() != t.edges.size())
        throw ParameterError("edge_conductances: size mismatch");
    std::vector<double> g(t.edges.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = conductance(states[k].w, branch[k], t.edges[k].params);
    return g;
}

LinearSystem assemble(const NetworkTopology& t, std::span<const double> branch, double v_in) {
    std::vector<DeviceState> states;
    states.reserve(t.edges.size());
    for (const auto& e : t.edges) states.push_back(e.state);
    return MnaAssembler(t).assemble(edge_conductances(t, states, branch), v_in);
}

StepSolution solve_step(const LinearSystem& sys, long step) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
    const Eigen::VectorXd x = lu.solve(sys.rhs);
    if (!x.allFinite()) throw NumericalError("solve: non-finite solution", step);
    const double residual = (sys.matrix * x - sys.rhs).lpNorm<Eigen::Infinity>();
    const double bound = 1e-9 * std::max(1.0, sys.rhs.lpNorm<Eigen::Infinity>());
    if (!(residual < bound)) throw NumericalError("solve: KCL residual above bound", step);

    StepSolution out;
    out.node_voltages.assign(sys.row_of_node.size(), 0.0);
    for (std::size_t n = 0; n < sys.row_of_node.size(); ++n)
        if (sys.row_of_node[n] >= 0) out.node_voltages[n] = x(sys.row_of_node[n]);
    out.source_current = -x(sys.source_row);
    out.residual = residual;
    return out;
}

std::vector<double> branch_voltages(const NetworkTopology& t, std::span<const double> v) {
    std::vector<double> out(t.edges.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = v[t.edges[k].a] - v[t.edges[k].b];
    return out;
}

void validate(const SolverOptions& opt) {
    if (!(opt.dt > 0 && std::isfinite(opt.dt))) throw ParameterError("solver: dt must be positive");
    if (!(opt.duration >= opt.dt && std::isfinite(opt.duration)))
        throw ParameterError("solver: duration must be >= dt");
    if (opt.decimation == 0) throw ParameterError("solver: decimation must be >= 1");
    if (opt.max_iterations < 1) throw ParameterError("solver: max_iterations must be >= 1");
}

std::size_t step_count(double dt, double duration) {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

namespace {

double max_relative_change(std::span<const double> a, std::span<const double> b) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return scale > 0 ? diff / scale : diff;
}

}  // namespace

SimulationTrace simulate(const NetworkTopology& t, const Waveform& waveform, const SolverOptions& opt) {
    validate(opt);
    const std::size_t steps = step_count(opt.dt, opt.duration);
    const std::size_t rows = (steps + opt.decimation - 1) / opt.decimation;
    const auto& iface = t.grid.interface_nodes();

    SimulationTrace trace;
    trace.dt = opt.dt * static_cast<double>(opt.decimation);
    trace.interface_voltages.resize(static_cast<long>(rows), static_cast<long>(iface.size()));
    trace.times.reserve(rows);
    trace.source_current.reserve(rows);
    trace.applied_voltage.reserve(rows);

    const MnaAssembler mna(t);
    std::vector<DeviceState> states;
    states.reserve(t.edges.size());
    for (const auto& e : t.edges) states.push_back(e.state);
    std::vector<double> branch(t.edges.size(), 0.0);

    for (std::size_t k = 0; k < steps; ++k) {
        const double time = static_cast<double>(k) * opt.dt;
        const double v_in = waveform(time);
        if (!std::isfinite(v_in)) throw NumericalError("simulate: non-finite waveform value", static_cast<long>(k));

        auto sol = solve_step(mna.assemble(edge_conductances(t, states, branch), v_in), static_cast<long>(k));
        auto next_branch = branch_voltages(t, sol.node_voltages);
        if (opt.fixed_point) {
            for (int it = 1; it < opt.max_iterations; ++it) {
                auto refined = solve_step(mna.assemble(edge_conductances(t, states, next_branch), v_in),
                                          static_cast<long>(k));
                auto refined_branch = branch_voltages(t, refined.node_voltages);
                const double change = max_relative_change(refined_branch, next_branch);
                sol = std::move(refined);
                next_branch = std::move(refined_branch);
                if (change < opt.iteration_tolerance) break;
            }
        }
        branch = std::move(next_branch);

        for (std::size_t e = 0; e < states.size(); ++e) {
            const int before = states[e].w;
            states[e] = apply_hysteresis(
                step_internal_state(states[e], branch[e], opt.dt, t.edges[e].params, opt.decay),
                t.edges[e].params);
            if (states[e].w != before) ++trace.switching_events;
        }
        trace.max_residual = std::max(trace.max_residual, sol.residual);

        if (k % opt.decimation == 0) {
            const long row = static_cast<long>(trace.times.size());
            for (std::size_t i = 0; i < iface.size(); ++i)
                trace.interface_voltages(row, static_cast<long>(i)) = sol.node_voltages[iface[i]];
            trace.times.push_back(time);
            trace.source_current.push_back(sol.source_current);
            trace.applied_voltage.push_back(v_in);
        }
    }
    trace.final_states = std::move(states);
    return trace;
}

}  // namespace rsnet
