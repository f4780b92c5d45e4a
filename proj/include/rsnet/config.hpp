#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "rsnet/harness.hpp"
#include "rsnet/io.hpp"

namespace rsnet {

/// Resolved run configuration shared by all CLI subcommands. Interface posts
/// are numbered from 1 (row-major, upper-left first) in config documents and
/// from 0 in the library API.
struct RunConfig {
    ExperimentSettings settings;
    Cell cell;                         ///< single-network coordinates
    std::optional<SweepConfig> sweep;  ///< present when the document has a "sweep" block
    HierarchyConfig hierarchy;
    std::size_t trials = 10;           ///< hierarchy runs without a sweep block
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::filesystem::path out = "out";
    bool heatmap = false;

    [[nodiscard]] WaveformSpec waveform() const { return {settings.waveform, cell.amplitude, settings.frequency}; }
};

/// Parses a config document. Unknown keys and invalid values raise
/// ConfigError naming the offending key (e.g. "solver.dt").
[[nodiscard]] RunConfig parse_run_config(const Json& doc);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical echo of the resolved configuration (used in run manifests).
[[nodiscard]] Json to_json(const RunConfig& cfg);

/// Sweep for the `sweep` subcommand: the document's sweep axes, or the
/// default (alpha, beta, xi, v) grid.
[[nodiscard]] SweepConfig sweep_config(const RunConfig& cfg);

/// Sweep for the `hierarchy` subcommand: the document's sweep axes if given,
/// otherwise the single configured cell with `trials` repetitions.
[[nodiscard]] SweepConfig hierarchy_sweep_config(const RunConfig& cfg);

}  // namespace rsnet
