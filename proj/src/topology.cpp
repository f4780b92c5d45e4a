#include "rsnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "rsnet/error.hpp"

namespace rsnet {

Grid::Grid(std::size_t interface_dim, std::size_t subdivision)
    : interface_dim_(interface_dim),
      subdivision_(subdivision),
      side_(interface_dim + (interface_dim - 1) * subdivision) {
    if (interface_dim < 2) throw ParameterError("grid: interface_dim must be >= 2");
    const std::size_t pitch = subdivision + 1;
    for (std::size_t r = 0; r < side_; r += pitch)
        for (std::size_t c = 0; c < side_; c += pitch) interface_nodes_.push_back(node_at(r, c));
}

Point Grid::position(NodeId n) const {
    if (n >= node_count()) throw ParameterError("grid: node index out of range");
    return {static_cast<double>(n % side_), static_cast<double>(n / side_)};
}

bool Grid::is_interface(NodeId n) const { return interface_index(n).has_value(); }

std::optional<std::size_t> Grid::interface_index(NodeId n) const {
    if (n >= node_count()) return std::nullopt;
    const std::size_t pitch = subdivision_ + 1;
    const std::size_t r = n / side_, c = n % side_;
    if (r % pitch || c % pitch) return std::nullopt;
    return (r / pitch) * interface_dim_ + c / pitch;
}

std::vector<NodeId> Grid::lattice_neighbors(NodeId n) const {
    const std::size_t r = n / side_, c = n % side_;
    std::vector<NodeId> out;
    if (r > 0) out.push_back(node_at(r - 1, c));
    if (c > 0) out.push_back(node_at(r, c - 1));
    if (c + 1 < side_) out.push_back(node_at(r, c + 1));
    if (r + 1 < side_) out.push_back(node_at(r + 1, c));
    return out;
}

Grid build_grid(std::size_t interface_dim, std::size_t subdivision) {
    return Grid(interface_dim, subdivision);
}

DistanceMap::DistanceMap(const Grid& grid) : n_(grid.node_count()), d_(n_ * n_, 0.0) {
    double max_d = 0.0;
    for (NodeId i = 0; i < n_; ++i) {
        const Point p = grid.position(i);
        for (NodeId j = 0; j < n_; ++j) {
            const Point q = grid.position(j);
            const double d = std::hypot(p.x - q.x, p.y - q.y);
            d_[i * n_ + j] = d;
            max_d = std::max(max_d, d);
        }
    }
    for (auto& d : d_) d /= max_d;
}

double BetaShape::skewness() const {
    return 2.0 * (beta - alpha) * std::sqrt(alpha + beta + 1.0) /
           ((alpha + beta + 2.0) * std::sqrt(alpha * beta));
}

void validate(const BetaShape& shape) {
    if (!(std::isfinite(shape.alpha) && shape.alpha > 0 && std::isfinite(shape.beta) && shape.beta > 0))
        throw ParameterError("beta shape: alpha and beta must be positive");
}

double beta_sample(const BetaShape& shape, Rng& rng) {
    std::gamma_distribution<double> ga(shape.alpha, 1.0);
    std::gamma_distribution<double> gb(shape.beta, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    if (x + y <= 0.0) return shape.alpha >= shape.beta ? 1.0 : 0.0;
    return x / (x + y);
}

namespace {

std::vector<std::vector<NodeId>> adjacency(const NetworkTopology& t) {
    std::vector<std::vector<NodeId>> adj(t.grid.node_count());
    for (const auto& e : t.edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    return adj;
}

}  // namespace

std::vector<bool> reachable_from(const NetworkTopology& t, NodeId start) {
    const auto adj = adjacency(t);
    std::vector<bool> seen(t.grid.node_count(), false);
    std::vector<NodeId> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        for (NodeId m : adj[n])
            if (!seen[m]) {
                seen[m] = true;
                stack.push_back(m);
            }
    }
    return seen;
}

bool is_connected(const NetworkTopology& t) {
    return reachable_from(t, t.input_node())[t.ground_node()];
}

std::size_t ensure_connected(NetworkTopology& t, const ParamRanges& ranges, Rng& rng) {
    if (is_connected(t)) return 0;

    // 0-1 BFS: existing devices cost nothing, a new lattice-neighbour device costs 1.
    const std::size_t n = t.grid.node_count();
    const auto adj = adjacency(t);
    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(n, kInf);
    std::vector<NodeId> prev(n, n);
    std::vector<bool> via_new(n, false);
    std::deque<NodeId> queue;
    const NodeId src = t.input_node(), dst = t.ground_node();
    dist[src] = 0;
    queue.push_back(src);
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : adj[u])
            if (dist[u] < dist[v]) {
                dist[v] = dist[u];
                prev[v] = u;
                via_new[v] = false;
                queue.push_front(v);
            }
        for (NodeId v : t.grid.lattice_neighbors(u))
            if (dist[u] + 1 < dist[v]) {
                dist[v] = dist[u] + 1;
                prev[v] = u;
                via_new[v] = true;
                queue.push_back(v);
            }
    }

    std::vector<std::pair<NodeId, NodeId>> added;
    for (NodeId v = dst; v != src; v = prev[v])
        if (via_new[v]) added.emplace_back(prev[v], v);
    std::reverse(added.begin(), added.end());
    for (auto [a, b] : added) t.edges.push_back({a, b, sample_device_params(ranges, rng), {}});
    return added.size();
}

NetworkTopology generate_network(const Grid& grid, const GenerateOptions& opt, Rng& rng) {
    validate(opt.shape);
    validate(opt.ranges);
    if (!(opt.xi >= 1.0)) throw ParameterError("generate: indegree xi must be >= 1");
    const std::size_t ni = grid.interface_count();
    if (ni < 2 || grid.node_count() < 2) throw GenerationError("generate: grid too small");

    NetworkTopology t;
    t.grid = grid;
    t.input = opt.input.value_or(0);
    t.ground = opt.ground.value_or(ni - 1);
    if (t.input >= ni || t.ground >= ni) throw ParameterError("generate: input/ground must be interface posts");
    if (t.input == t.ground) throw ParameterError("generate: input and ground must differ");

    const std::size_t n = grid.node_count();
    const std::size_t count =
        opt.edge_count.value_or(static_cast<std::size_t>(std::llround(static_cast<double>(n) * opt.xi)));
    const DistanceMap dist(grid);
    std::uniform_int_distribution<NodeId> pick_node(0, n - 1);

    t.edges.reserve(count);
    std::vector<NodeId> ties;
    for (std::size_t k = 0; k < count; ++k) {
        const NodeId start = pick_node(rng);
        const double length = beta_sample(opt.shape, rng);
        double best = std::numeric_limits<double>::infinity();
        ties.clear();
        for (NodeId j = 0; j < n; ++j) {
            if (j == start) continue;
            const double gap = std::abs(dist(start, j) - length);
            if (gap < best - 1e-12) {
                best = gap;
                ties.assign(1, j);
            } else if (gap <= best + 1e-12) {
                ties.push_back(j);
            }
        }
        if (ties.empty()) throw GenerationError("generate: no endpoint candidate");
        NodeId end = ties.front();
        if (ties.size() > 1) {
            std::uniform_int_distribution<std::size_t> pick_tie(0, ties.size() - 1);
            end = ties[pick_tie(rng)];
        }
        t.edges.push_back({start, end, sample_device_params(opt.ranges, rng), {}});
    }
    t.generated_edges = t.edges.size();
    ensure_connected(t, opt.ranges, rng);
    if (!is_connected(t)) throw GenerationError("generate: could not connect input and ground");
    return t;
}

NetworkTopology generate_network(const Grid& grid, const GenerateOptions& opt, std::uint64_t seed) {
    Rng rng(seed);
    auto t = generate_network(grid, opt, rng);
    t.seed = seed;
    return t;
}

std::vector<double> edge_lengths(const NetworkTopology& t) {
    const DistanceMap dist(t.grid);
    std::vector<double> out;
    out.reserve(t.edges.size());
    for (const auto& e : t.edges) out.push_back(dist(e.a, e.b));
    return out;
}

}  // namespace rsnet
