#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rsnet/analysis.hpp"
#include "rsnet/device.hpp"
#include "rsnet/solver.hpp"
#include "rsnet/topology.hpp"

namespace rsnet {

/// Everything a run needs besides the swept coordinates.
struct ExperimentSettings {
    std::size_t interface_dim = 4;
    std::size_t subdivision = 1;
    ParamRanges ranges = ParamRanges::around(DeviceParams{});
    SolverOptions solver;
    WaveformSpec::Kind waveform = WaveformSpec::Kind::Sine;
    double frequency = 5.0;  ///< sine drive [Hz]
    bool center = true;
    std::optional<std::size_t> edge_count;
    std::optional<std::size_t> input;
    std::optional<std::size_t> ground;
};

/// One point of the (alpha, beta, xi, v) grid.
struct Cell {
    double alpha = 1.0;
    double beta = 1.0;
    double xi = 4.0;
    double amplitude = 1.0;
};

struct SweepRecord {
    double alpha = 0, beta = 0, xi = 0, v = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double entropy_bits = 0;
    double energy_joules = 0;
    std::size_t switching_events = 0;
    std::size_t edge_count = 0;
    bool degenerate = false;
    std::string error;  ///< empty on success

    [[nodiscard]] bool ok() const { return error.empty(); }
    friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

struct HierarchyConfig {
    std::size_t networks = 16;
    std::size_t readout_a = 1;  ///< interface index; post "2" in 1-based numbering
    std::size_t readout_b = 8;  ///< post "9"
};

void validate(const ExperimentSettings& s);
void validate(const HierarchyConfig& h, std::size_t interface_count);

/// Seed of hierarchy member `m`; member 0 reuses the cell seed.
[[nodiscard]] std::uint64_t member_seed(std::uint64_t seed, std::size_t m);

/// Generates, simulates and analyses one network (entropy over all interface
/// posts).
[[nodiscard]] SweepRecord run_single(const ExperimentSettings& s, const Cell& cell, std::uint64_t seed);

/// K independent networks under the same drive; entropy over their
/// differential readouts, energy summed over members.
[[nodiscard]] SweepRecord run_hierarchy(const ExperimentSettings& s, const HierarchyConfig& h,
                                        const Cell& cell, std::uint64_t seed, unsigned workers = 1);

/// Simulated trace of one network, for export.
struct SingleRun {
    NetworkTopology topology;
    SimulationTrace trace;
};
[[nodiscard]] SingleRun simulate_cell(const ExperimentSettings& s, const Cell& cell, std::uint64_t seed);

struct SweepConfig {
    std::vector<double> alphas{1, 2, 3, 5, 7, 10};
    std::vector<double> betas{1, 2, 3, 5, 7, 10};
    std::vector<double> xis{2, 4, 6, 8};
    std::vector<double> amplitudes{1, 2, 4, 8};
    std::size_t trials = 10;
    std::uint64_t base_seed = 1;
    ExperimentSettings settings;
    std::optional<HierarchyConfig> hierarchy;  ///< run hierarchies instead of single networks
    unsigned workers = 1;
};

void validate(const SweepConfig& cfg);

/// Per-cell statistics over successful trials (sample standard deviation).
struct CellAggregate {
    double alpha = 0, beta = 0, xi = 0, v = 0;
    std::size_t trials_ok = 0;
    std::size_t trials_failed = 0;
    double mean_entropy = 0, sd_entropy = 0;
    double mean_energy = 0, sd_energy = 0;
};

struct SweepResult {
    std::vector<SweepRecord> records;  ///< ordered by (alpha, beta, xi, v, trial) indices
    std::vector<CellAggregate> aggregates;
};

/// Seed of one sweep record, from the base seed and the cell/trial indices.
[[nodiscard]] std::uint64_t cell_seed(std::uint64_t base, std::size_t ai, std::size_t bi, std::size_t xi,
                                      std::size_t vi, std::size_t trial);

/// Runs every (alpha, beta, xi, v, trial) combination. Failures are recorded
/// in the record's error field and do not stop the sweep.
[[nodiscard]] SweepResult run_sweep(const SweepConfig& cfg);

[[nodiscard]] std::vector<CellAggregate> aggregate(const std::vector<SweepRecord>& records);

/// Runs fn(0..n-1) on up to `workers` threads.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace rsnet
