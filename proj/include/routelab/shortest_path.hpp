#pragma once

#include <routelab/error.hpp>
#include <routelab/graph.hpp>
#include <routelab/parallel.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace routelab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Reusable Dijkstra state sized to one graph. Only touched entries are
/// reset between runs, so many small bounded searches stay cheap.
///
/// Ties are broken deterministically: a node keeps the predecessor with the
/// smallest (owning source, predecessor id) among all predecessors achieving
/// its distance. The outcome is independent of heap order.
class DijkstraWorkspace {
public:
    explicit DijkstraWorkspace(const Graph& graph)
        : graph_(&graph), distance_(graph.node_count(), kInfinity),
          parent_(graph.node_count(), kNoNode), owner_(graph.node_count(), kNoNode),
          settled_(graph.node_count(), 0) {}

    /// Multi-source search. `allowed(v)` restricts the traversal to a node
    /// subset (sources must be allowed); `on_settle(u)` is called as each node
    /// is finalized and returns false to stop early.
    template <class Allowed, class OnSettle>
    void run(Metric metric, std::span<const NodeId> sources, Allowed&& allowed, OnSettle&& on_settle) {
        reset();
        using Entry = std::tuple<double, NodeId, NodeId>; // (distance, owner, node)
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
        for (NodeId s : sources) {
            if (!graph_->contains(s))
                throw Error(ErrorCode::InvalidNode, "source " + std::to_string(s) + " out of range");
            if (owner_[s] != kNoNode)
                continue;
            touch(s);
            distance_[s] = 0.0;
            owner_[s] = s;
            heap.emplace(0.0, s, s);
        }
        while (!heap.empty()) {
            const auto [du, ou, u] = heap.top();
            heap.pop();
            if (settled_[u] || du != distance_[u] || ou != owner_[u])
                continue;
            settled_[u] = 1;
            order_.push_back(u);
            if (!on_settle(u))
                return;
            for (const Neighbor& nb : graph_->neighbors(u)) {
                const NodeId v = nb.node;
                if (settled_[v] || !allowed(v))
                    continue;
                const double nd = du + metric_weight(nb.rtt, metric);
                bool better = nd < distance_[v];
                if (!better && nd == distance_[v])
                    better = ou < owner_[v] || (ou == owner_[v] && u < parent_[v]);
                if (better) {
                    if (distance_[v] == kInfinity)
                        touch(v);
                    distance_[v] = nd;
                    owner_[v] = ou;
                    parent_[v] = u;
                    heap.emplace(nd, ou, v);
                }
            }
        }
    }

    void run(Metric metric, std::span<const NodeId> sources) {
        run(metric, sources, [](NodeId) { return true; }, [](NodeId) { return true; });
    }

    double distance(NodeId v) const noexcept { return distance_[v]; }
    NodeId parent(NodeId v) const noexcept { return parent_[v]; }
    NodeId owner(NodeId v) const noexcept { return owner_[v]; }
    bool settled(NodeId v) const noexcept { return settled_[v] != 0; }

    /// Nodes in the order they were finalized by the last run.
    std::span<const NodeId> settled_order() const noexcept { return order_; }

private:
    void touch(NodeId v) { touched_.push_back(v); }

    void reset() {
        for (NodeId v : touched_) {
            distance_[v] = kInfinity;
            parent_[v] = kNoNode;
            owner_[v] = kNoNode;
            settled_[v] = 0;
        }
        touched_.clear();
        order_.clear();
    }

    const Graph* graph_;
    std::vector<double> distance_;
    std::vector<NodeId> parent_;
    std::vector<NodeId> owner_;
    std::vector<char> settled_;
    std::vector<NodeId> touched_;
    std::vector<NodeId> order_;
};

/// Single-source shortest paths. parent[source] == kNoNode.
struct DistanceMap {
    NodeId source = kNoNode;
    std::vector<double> distance;
    std::vector<NodeId> parent;

    /// Node sequence from v back to the source.
    std::vector<NodeId> path_to_source(NodeId v) const {
        std::vector<NodeId> path{v};
        while (v != source) {
            v = parent[v];
            path.push_back(v);
        }
        return path;
    }
};

inline DistanceMap sssp(const Graph& graph, NodeId source, Metric metric) {
    if (!graph.contains(source))
        throw Error(ErrorCode::InvalidNode, "source " + std::to_string(source) + " out of range");
    DijkstraWorkspace ws(graph);
    const NodeId sources[] = {source};
    ws.run(metric, sources);
    DistanceMap out;
    out.source = source;
    out.distance.resize(graph.node_count());
    out.parent.resize(graph.node_count());
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        out.distance[v] = ws.distance(v);
        out.parent[v] = ws.parent(v);
    }
    return out;
}

/// Shortest-path Voronoi cells: every node is assigned its nearest source
/// (ties to the smaller source id, then the smaller parent id). A node's
/// parent always lies in the same cell, so cells are connected.
struct VoronoiPartition {
    std::vector<NodeId> owner;
    std::vector<double> distance;
    std::vector<NodeId> parent;

    std::size_t cell_size(NodeId source) const {
        return static_cast<std::size_t>(std::count(owner.begin(), owner.end(), source));
    }
};

inline VoronoiPartition multi_source_partition(const Graph& graph, std::span<const NodeId> sources,
                                               Metric metric) {
    if (sources.empty())
        throw Error(ErrorCode::EmptySourceSet, "multi-source partition needs at least one source");
    DijkstraWorkspace ws(graph);
    ws.run(metric, sources);
    VoronoiPartition out;
    out.owner.resize(graph.node_count());
    out.distance.resize(graph.node_count());
    out.parent.resize(graph.node_count());
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        out.owner[v] = ws.owner(v);
        out.distance[v] = ws.distance(v);
        out.parent[v] = ws.parent(v);
    }
    return out;
}

inline constexpr std::size_t kAllPairsCap = std::size_t{1} << 14;

/// Exact distances for either all pairs or a requested pair set, under one
/// metric. Symmetric by construction: every stored value comes from the
/// search rooted at the smaller endpoint. Immutable once built.
class DistanceOracle {
public:
    static DistanceOracle all_pairs(const Graph& graph, Metric metric, unsigned threads = 1,
                                    std::size_t cap = kAllPairsCap) {
        const std::size_t n = graph.node_count();
        if (n > cap)
            throw Error(ErrorCode::GraphTooLarge, std::to_string(n) + " nodes exceed the all-pairs cap of " +
                                                      std::to_string(cap));
        DistanceOracle out(metric, n);
        out.matrix_.assign(n * n, 0.0);
        parallel_for(n, threads, [&](std::size_t s) {
            const DistanceMap row = sssp(graph, static_cast<NodeId>(s), metric);
            for (std::size_t t = s + 1; t < n; ++t) {
                out.matrix_[s * n + t] = row.distance[t];
                out.matrix_[t * n + s] = row.distance[t];
            }
        });
        return out;
    }

    /// Distances for the given (source, dest) pairs only.
    static DistanceOracle for_pairs(const Graph& graph, Metric metric,
                                    std::span<const std::pair<NodeId, NodeId>> pairs, unsigned threads = 1) {
        DistanceOracle out(metric, graph.node_count());
        std::vector<std::uint64_t> keys;
        keys.reserve(pairs.size());
        for (const auto& [s, t] : pairs) {
            if (!graph.contains(s) || !graph.contains(t))
                throw Error(ErrorCode::InvalidNode, "pair endpoint out of range");
            if (s != t)
                keys.push_back(key(s, t));
        }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

        // group by the smaller endpoint, which roots the search
        std::vector<std::size_t> group_start;
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (i == 0 || (keys[i] >> 32) != (keys[i - 1] >> 32))
                group_start.push_back(i);
        group_start.push_back(keys.size());

        out.sparse_.resize(keys.size());
        parallel_for(group_start.size() - 1, threads, [&](std::size_t g) {
            const auto root = static_cast<NodeId>(keys[group_start[g]] >> 32);
            const DistanceMap row = sssp(graph, root, metric);
            for (std::size_t i = group_start[g]; i < group_start[g + 1]; ++i)
                out.sparse_[i] = {keys[i], row.distance[static_cast<NodeId>(keys[i] & 0xffffffffu)]};
        });
        return out;
    }

    Metric metric() const noexcept { return metric_; }
    std::size_t node_count() const noexcept { return n_; }
    bool complete() const noexcept { return !matrix_.empty() || n_ <= 1; }

    bool has(NodeId s, NodeId t) const noexcept {
        if (s >= n_ || t >= n_)
            return false;
        if (s == t || !matrix_.empty())
            return true;
        return find(s, t) != sparse_.end();
    }

    double operator()(NodeId s, NodeId t) const {
        if (s >= n_ || t >= n_)
            throw Error(ErrorCode::InvalidNode, "oracle query out of range");
        if (s == t)
            return 0.0;
        if (!matrix_.empty())
            return matrix_[std::size_t{s} * n_ + t];
        const auto it = find(s, t);
        if (it == sparse_.end())
            throw Error(ErrorCode::OracleUnavailable, "no distance stored for pair " + std::to_string(s) +
                                                          "," + std::to_string(t));
        return it->second;
    }

private:
    DistanceOracle(Metric metric, std::size_t n) : metric_(metric), n_(n) {}

    static std::uint64_t key(NodeId s, NodeId t) noexcept {
        const auto [a, b] = std::minmax(s, t);
        return (std::uint64_t{a} << 32) | b;
    }

    std::vector<std::pair<std::uint64_t, double>>::const_iterator find(NodeId s, NodeId t) const noexcept {
        const std::uint64_t k = key(s, t);
        const auto it = std::lower_bound(sparse_.begin(), sparse_.end(), k,
                                         [](const auto& entry, std::uint64_t value) { return entry.first < value; });
        return (it != sparse_.end() && it->first == k) ? it : sparse_.end();
    }

    Metric metric_;
    std::size_t n_;
    std::vector<double> matrix_;
    std::vector<std::pair<std::uint64_t, double>> sparse_;
};

inline DistanceOracle all_pairs(const Graph& graph, Metric metric, unsigned threads = 1,
                                std::size_t cap = kAllPairsCap) {
    return DistanceOracle::all_pairs(graph, metric, threads, cap);
}

} // namespace routelab
