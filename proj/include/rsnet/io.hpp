#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rsnet/harness.hpp"
#include "rsnet/solver.hpp"
#include "rsnet/topology.hpp"

namespace rsnet {

using Json = nlohmann::ordered_json;

/// Decimal with 9 significant digits.
[[nodiscard]] std::string format_number(double v);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

[[nodiscard]] Json to_json(const DeviceParams& p);
[[nodiscard]] DeviceParams device_params_from_json(const Json& j);

/// Topology interchange document (grid, edges with parameters and states,
/// input/ground interface indices, seed).
[[nodiscard]] Json to_json(const NetworkTopology& t);
[[nodiscard]] NetworkTopology topology_from_json(const Json& j);
void write_topology(const std::filesystem::path& path, const NetworkTopology& t);
[[nodiscard]] NetworkTopology read_topology(const std::filesystem::path& path);

/// Columns: t, v_in, i_src, node_1 ... node_N.
[[nodiscard]] std::string trace_csv(const SimulationTrace& trace);
[[nodiscard]] SimulationTrace parse_trace_csv(std::string_view text);

inline constexpr std::string_view kRecordsHeader =
    "alpha,beta,xi,v,trial,seed,entropy_bits,energy_joules,switching_events,edge_count,degenerate,error";
inline constexpr std::string_view kAggregateHeader =
    "alpha,beta,xi,v,trials_ok,trials_failed,mean_entropy,sd_entropy,mean_energy,sd_energy";

[[nodiscard]] std::string records_csv(const std::vector<SweepRecord>& records);
[[nodiscard]] std::string aggregates_csv(const std::vector<CellAggregate>& cells);

/// Heatmap of `values` (row-major, betas x alphas) with alpha on the x axis.
[[nodiscard]] std::string heatmap_svg(const std::vector<double>& alphas, const std::vector<double>& betas,
                                      const std::vector<double>& values, const std::string& title);

/// Scatter of mean entropy against log10 of mean energy.
[[nodiscard]] std::string energy_entropy_svg(const std::vector<CellAggregate>& cells, const std::string& title);

}  // namespace rsnet
