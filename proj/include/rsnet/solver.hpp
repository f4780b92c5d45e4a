#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rsnet/device.hpp"
#include "rsnet/topology.hpp"

namespace rsnet {

/// Source voltage as a function of time.
using Waveform = std::function<double(double)>;

/// Parametric description of the drive, serializable in run configs.
struct WaveformSpec {
    enum class Kind { Sine, Constant };
    Kind kind = Kind::Sine;
    double amplitude = 1.0;  ///< [V]
    double frequency = 5.0;  ///< [Hz], sine only

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] Waveform function() const {
        return [spec = *this](double t) { return spec(t); };
    }
};

/// Modified nodal analysis system for one time step. Unknowns are the
/// voltages of the active non-ground nodes followed by the source current.
struct LinearSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    std::vector<long> row_of_node;  ///< -1 for ground and inactive nodes
    long source_row = -1;

    [[nodiscard]] std::size_t dimension() const { return static_cast<std::size_t>(rhs.size()); }
};

struct StepSolution {
    std::vector<double> node_voltages;  ///< every grid node; inactive nodes read 0
    double source_current = 0.0;        ///< current drawn from the source [A]
    double residual = 0.0;              ///< ||A x - b||_inf
};

/// Stamps a topology for repeated solves. Nodes that no device path links to
/// the ground post are left out of the system and read 0 V.
class MnaAssembler {
public:
    explicit MnaAssembler(const NetworkTopology& t);

    /// System for explicit per-edge conductances.
    [[nodiscard]] LinearSystem assemble(std::span<const double> edge_conductance, double v_in) const;

    [[nodiscard]] std::size_t active_nodes() const noexcept { return active_count_; }

private:
    const NetworkTopology* topology_;
    std::vector<long> row_of_node_;
    std::size_t active_count_ = 0;
};

/// Device conductances for the given branch voltages and current binary states.
[[nodiscard]] std::vector<double> edge_conductances(const NetworkTopology& t,
                                                    std::span<const DeviceState> states,
                                                    std::span<const double> branch_voltages);

/// Assembles from device states (edge.state) at the given previous-step
/// branch voltages.
[[nodiscard]] LinearSystem assemble(const NetworkTopology& t, std::span<const double> branch_voltages,
                                    double v_in);

/// Solves and verifies the KCL residual bound 1e-9 * max(1, ||b||_inf).
/// Throws NumericalError tagged with `step` on failure.
[[nodiscard]] StepSolution solve_step(const LinearSystem& sys, long step = -1);

/// Per-edge voltage V(a) - V(b).
[[nodiscard]] std::vector<double> branch_voltages(const NetworkTopology& t,
                                                  std::span<const double> node_voltages);

struct SolverOptions {
    double dt = 1e-3;
    double duration = 1.0;
    DecayMode decay = DecayMode::StateDependent;
    bool fixed_point = false;  ///< re-linearize within a step until voltages settle
    int max_iterations = 10;
    double iteration_tolerance = 1e-6;
    std::size_t decimation = 1;  ///< keep every n-th step in the trace
};

void validate(const SolverOptions& opt);

struct SimulationTrace {
    std::vector<double> times;
    Eigen::MatrixXd interface_voltages;  ///< rows: recorded steps, cols: interface posts
    std::vector<double> source_current;
    std::vector<double> applied_voltage;
    std::size_t switching_events = 0;
    double dt = 0.0;          ///< spacing between recorded rows
    double max_residual = 0.0;
    std::vector<DeviceState> final_states;

    [[nodiscard]] std::size_t steps() const { return times.size(); }
};

/// Quasi-static time loop: each step solves the network with conductances at
/// the previous branch voltages, then advances every device with the new
/// branch voltages and thresholds it.
[[nodiscard]] SimulationTrace simulate(const NetworkTopology& t, const Waveform& waveform,
                                       const SolverOptions& opt = {});

/// Number of steps for a duration, rounded to the nearest whole step.
[[nodiscard]] std::size_t step_count(double dt, double duration);

}  // namespace rsnet
