#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rsnet/device.hpp"
#include "rsnet/random.hpp"

namespace rsnet {

using NodeId = std::size_t;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Seed-post lattice. Interface posts sit on every (subdivision+1)-th lattice
/// position; the posts in between form the supporting grid. Nodes are indexed
/// row-major, row 0 at the top.
class Grid {
public:
    Grid() = default;
    Grid(std::size_t interface_dim, std::size_t subdivision);

    [[nodiscard]] std::size_t interface_dim() const noexcept { return interface_dim_; }
    [[nodiscard]] std::size_t subdivision() const noexcept { return subdivision_; }
    [[nodiscard]] std::size_t side() const noexcept { return side_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return side_ * side_; }
    [[nodiscard]] std::size_t interface_count() const noexcept { return interface_nodes_.size(); }

    [[nodiscard]] Point position(NodeId n) const;
    [[nodiscard]] bool is_interface(NodeId n) const;
    [[nodiscard]] NodeId node_at(std::size_t row, std::size_t col) const { return row * side_ + col; }

    /// Grid nodes of the interface posts, row-major (interface index -> node).
    [[nodiscard]] const std::vector<NodeId>& interface_nodes() const noexcept { return interface_nodes_; }
    /// Interface index of a grid node, if it is an interface post.
    [[nodiscard]] std::optional<std::size_t> interface_index(NodeId n) const;

    /// 4-neighbourhood on the lattice.
    [[nodiscard]] std::vector<NodeId> lattice_neighbors(NodeId n) const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t interface_dim_ = 0;
    std::size_t subdivision_ = 0;
    std::size_t side_ = 0;
    std::vector<NodeId> interface_nodes_;
};

/// Builds the lattice for `interface_dim` x `interface_dim` interface posts with
/// `subdivision` supporting posts between adjacent interface posts.
[[nodiscard]] Grid build_grid(std::size_t interface_dim, std::size_t subdivision);

/// Row-major node_count x node_count matrix of Euclidean distances divided by
/// the largest pairwise distance.
class DistanceMap {
public:
    explicit DistanceMap(const Grid& grid);

    [[nodiscard]] double operator()(NodeId a, NodeId b) const { return d_[a * n_ + b]; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::vector<double> d_;
};

[[nodiscard]] inline DistanceMap distance_map(const Grid& grid) { return DistanceMap(grid); }

struct BetaShape {
    double alpha = 1.0;
    double beta = 1.0;

    [[nodiscard]] double mean() const { return alpha / (alpha + beta); }
    [[nodiscard]] double skewness() const;
};

void validate(const BetaShape& shape);

/// Normalized wire length drawn from Beta(alpha, beta).
[[nodiscard]] double beta_sample(const BetaShape& shape, Rng& rng);

struct Edge {
    NodeId a = 0;
    NodeId b = 0;
    DeviceParams params;
    DeviceState state;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct NetworkTopology {
    Grid grid;
    std::vector<Edge> edges;
    std::size_t input = 0;   ///< interface index of the driven node
    std::size_t ground = 0;  ///< interface index of the grounded node
    std::uint64_t seed = 0;
    std::size_t generated_edges = 0;  ///< edges before connectivity augmentation

    [[nodiscard]] NodeId input_node() const { return grid.interface_nodes().at(input); }
    [[nodiscard]] NodeId ground_node() const { return grid.interface_nodes().at(ground); }

    friend bool operator==(const NetworkTopology&, const NetworkTopology&) = default;
};

struct GenerateOptions {
    BetaShape shape;
    double xi = 4.0;                          ///< indegree
    std::optional<std::size_t> edge_count;    ///< overrides node_count * xi
    std::optional<std::size_t> input;         ///< default: upper-left interface post
    std::optional<std::size_t> ground;        ///< default: lower-right interface post
    ParamRanges ranges = ParamRanges::around(DeviceParams{});
};

/// Random multigraph of devices: per edge a uniform start node, a beta-drawn
/// normalized length, and the node whose distance from the start is closest to
/// that length (uniform tie-break). Result is made input-ground connected.
[[nodiscard]] NetworkTopology generate_network(const Grid& grid, const GenerateOptions& opt,
                                               std::uint64_t seed);

/// Same, continuing an existing random stream.
[[nodiscard]] NetworkTopology generate_network(const Grid& grid, const GenerateOptions& opt,
                                               Rng& rng);

/// True when an edge path links the input and ground posts.
[[nodiscard]] bool is_connected(const NetworkTopology& t);

/// Adds the fewest lattice-neighbour edges needed to join input and ground.
/// Returns the number of edges added; 0 when already connected.
std::size_t ensure_connected(NetworkTopology& t, const ParamRanges& ranges, Rng& rng);

/// Nodes reachable from `start` through device edges.
[[nodiscard]] std::vector<bool> reachable_from(const NetworkTopology& t, NodeId start);

/// Normalized length of every edge.
[[nodiscard]] std::vector<double> edge_lengths(const NetworkTopology& t);

}  // namespace rsnet
