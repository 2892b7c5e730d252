#pragma once

#include <routelab/error.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace routelab {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Edge cost model: HOP charges 1 per link, RTT charges the link's rtt weight.
enum class Metric { Hop, Rtt };

constexpr std::string_view to_string(Metric metric) noexcept {
    return metric == Metric::Hop ? "hop" : "rtt";
}

inline Metric parse_metric(std::string_view text) {
    if (text == "hop" || text == "HOP")
        return Metric::Hop;
    if (text == "rtt" || text == "RTT")
        return Metric::Rtt;
    throw Error(ErrorCode::InvalidParameters, "unknown metric '" + std::string(text) + "'");
}

constexpr double metric_weight(double rtt, Metric metric) noexcept {
    return metric == Metric::Hop ? 1.0 : rtt;
}

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double rtt = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    NodeId node;
    double rtt;
};

/// Immutable, connected, undirected graph with dense ids 0..node_count-1.
///
/// Edges are stored once with u < v, sorted by (u, v); adjacency is a CSR
/// array with each neighbor list sorted by id. A built Graph can be shared
/// freely between threads.
class Graph {
public:
    Graph() = default;

    /// Validates and builds. Rejects self-loops, duplicate edges, non-positive
    /// weights, out-of-range ids and disconnected graphs.
    static Graph from_edges(std::size_t node_count, std::vector<Edge> edges) {
        if (node_count == 0)
            throw Error(ErrorCode::InvalidParameters, "graph must have at least one node");
        if (node_count >= kNoNode)
            throw Error(ErrorCode::InvalidParameters, "node count exceeds id range");

        for (Edge& e : edges) {
            if (e.u >= node_count || e.v >= node_count)
                throw Error(ErrorCode::InvalidNode, "edge endpoint out of range");
            if (e.u == e.v)
                throw Error(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(e.u));
            if (!(e.rtt > 0.0))
                throw Error(ErrorCode::NonPositiveWeight, "edge " + std::to_string(e.u) + "-" +
                                                              std::to_string(e.v) +
                                                              " has non-positive weight");
            if (e.u > e.v)
                std::swap(e.u, e.v);
        }
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            return a.u != b.u ? a.u < b.u : a.v < b.v;
        });
        for (std::size_t i = 1; i < edges.size(); ++i) {
            if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
                throw Error(ErrorCode::DuplicateEdge, "duplicate edge " + std::to_string(edges[i].u) +
                                                          "-" + std::to_string(edges[i].v));
        }

        Graph g;
        g.node_count_ = node_count;
        g.edges_ = std::move(edges);
        g.offsets_.assign(node_count + 1, 0);
        for (const Edge& e : g.edges_) {
            ++g.offsets_[e.u + 1];
            ++g.offsets_[e.v + 1];
        }
        for (std::size_t i = 0; i < node_count; ++i)
            g.offsets_[i + 1] += g.offsets_[i];
        g.adjacency_.resize(g.offsets_.back());
        std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
        for (const Edge& e : g.edges_) {
            g.adjacency_[cursor[e.u]++] = {e.v, e.rtt};
            g.adjacency_[cursor[e.v]++] = {e.u, e.rtt};
        }
        for (std::size_t i = 0; i < node_count; ++i) {
            std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                      g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]),
                      [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
        }

        if (!g.is_connected())
            throw Error(ErrorCode::DisconnectedGraph, "graph is not connected");
        return g;
    }

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const Neighbor> neighbors(NodeId u) const noexcept {
        return {adjacency_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }

    std::size_t degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }

    bool contains(NodeId u) const noexcept { return u < node_count_; }

    /// Weight of edge (u, v), or a negative value when the nodes are not adjacent.
    double rtt(NodeId u, NodeId v) const noexcept {
        const auto nbrs = neighbors(u);
        const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                                         [](const Neighbor& n, NodeId id) { return n.node < id; });
        return (it != nbrs.end() && it->node == v) ? it->rtt : -1.0;
    }

    bool adjacent(NodeId u, NodeId v) const noexcept { return rtt(u, v) > 0.0; }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
    }

private:
    bool is_connected() const {
        std::vector<char> seen(node_count_, 0);
        std::vector<NodeId> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (const Neighbor& n : neighbors(u)) {
                if (!seen[n.node]) {
                    seen[n.node] = 1;
                    ++reached;
                    stack.push_back(n.node);
                }
            }
        }
        return reached == node_count_;
    }

    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
};

} // namespace routelab
