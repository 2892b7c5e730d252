#pragma once

#include <routelab/error.hpp>
#include <routelab/graph.hpp>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace routelab {

/// Node sequence produced by hop-by-hop forwarding, with its cost under
/// both metrics.
struct RoutePath {
    std::vector<NodeId> nodes;
    std::size_t cost_hop = 0;
    double cost_rtt = 0.0;

    double cost(Metric metric) const noexcept {
        return metric == Metric::Hop ? static_cast<double>(cost_hop) : cost_rtt;
    }
};

/// Accumulates a forwarded path, rejecting non-adjacent steps and revisits.
class ForwardingTrace {
public:
    ForwardingTrace(const Graph& graph, NodeId source) : graph_(&graph), visited_(graph.node_count(), 0) {
        path_.nodes.push_back(source);
        visited_[source] = 1;
    }

    NodeId current() const noexcept { return path_.nodes.back(); }

    void step(NodeId next) {
        const NodeId here = current();
        const double w = next < graph_->node_count() ? graph_->rtt(here, next) : -1.0;
        if (w <= 0.0)
            throw Error(ErrorCode::ForwardingStuck, "next hop " + std::to_string(next) + " is not a neighbor of " +
                                                        std::to_string(here));
        if (visited_[next])
            throw Error(ErrorCode::ForwardingStuck, "forwarding loop revisits node " + std::to_string(next));
        visited_[next] = 1;
        path_.nodes.push_back(next);
        path_.cost_hop += 1;
        path_.cost_rtt += w;
    }

    RoutePath finish() && { return std::move(path_); }

private:
    const Graph* graph_;
    std::vector<char> visited_;
    RoutePath path_;
};

/// Per-node table entry counts of a built scheme.
struct TableSizeSummary {
    std::vector<std::size_t> per_node;
    double mean = 0.0;
    std::size_t max = 0;

    static TableSizeSummary from_counts(std::vector<std::size_t> counts) {
        TableSizeSummary out;
        out.per_node = std::move(counts);
        if (!out.per_node.empty()) {
            const auto total = std::accumulate(out.per_node.begin(), out.per_node.end(), std::size_t{0});
            out.mean = static_cast<double>(total) / static_cast<double>(out.per_node.size());
            out.max = *std::max_element(out.per_node.begin(), out.per_node.end());
        }
        return out;
    }
};

/// ceil(log2(n)) for n >= 1; 0 for n <= 1.
constexpr unsigned ceil_log2(std::size_t n) noexcept {
    unsigned bits = 0;
    while ((std::size_t{1} << bits) < n)
        ++bits;
    return bits;
}

} // namespace routelab
