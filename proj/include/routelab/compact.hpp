#pragma once

#include <routelab/error.hpp>
#include <routelab/graph.hpp>
#include <routelab/random.hpp>
#include <routelab/route_path.hpp>
#include <routelab/shortest_path.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace routelab {

enum class LandmarkStrategy { Uniform, HighDegree };

/// Landmarks plus, for every node, its nearest landmark and the distance to it.
struct LandmarkSet {
    std::vector<NodeId> members; // sorted
    std::vector<NodeId> nearest_landmark;
    std::vector<double> landmark_distance;

    bool contains(NodeId v) const { return std::binary_search(members.begin(), members.end(), v); }
};

/// Builds a landmark set from explicit members, filling the nearest-landmark
/// fields from a shortest-path Voronoi partition.
inline LandmarkSet make_landmark_set(const Graph& graph, std::vector<NodeId> members, Metric metric) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty())
        throw Error(ErrorCode::CountOutOfRange, "landmark set must be nonempty");
    for (NodeId m : members)
        if (!graph.contains(m))
            throw Error(ErrorCode::InvalidNode, "landmark " + std::to_string(m) + " out of range");
    VoronoiPartition cells = multi_source_partition(graph, members, metric);
    LandmarkSet out;
    out.members = std::move(members);
    out.nearest_landmark = std::move(cells.owner);
    out.landmark_distance = std::move(cells.distance);
    return out;
}

/// Default landmark count: ceil(sqrt(N)).
inline std::size_t default_landmark_count(std::size_t n) {
    auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n)
        --r;
    while (r * r < n)
        ++r;
    return std::max<std::size_t>(r, 1);
}

inline LandmarkSet select_landmarks(const Graph& graph, std::size_t count, LandmarkStrategy strategy,
                                    std::uint64_t seed, Metric metric) {
    const std::size_t n = graph.node_count();
    if (count < 1 || count > n)
        throw Error(ErrorCode::CountOutOfRange, "landmark count " + std::to_string(count) + " not in [1, " +
                                                    std::to_string(n) + "]");
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), NodeId{0});
    if (strategy == LandmarkStrategy::Uniform) {
        Rng rng(derive_seed(seed, 0x1a4d));
        for (std::size_t i = 0; i < count; ++i)
            std::swap(ids[i], ids[i + rng.index(n - i)]);
    } else {
        std::stable_sort(ids.begin(), ids.end(),
                         [&](NodeId a, NodeId b) { return graph.degree(a) > graph.degree(b); });
    }
    ids.resize(count);
    return make_landmark_set(graph, std::move(ids), metric);
}

/// Header of a routed packet: destination id plus its landmark.
struct CompactLabel {
    NodeId node = kNoNode;
    NodeId landmark = kNoNode;

    /// Two node ids of ceil(log2 N) bits each.
    static unsigned bit_length(std::size_t node_count) noexcept { return 2 * ceil_log2(node_count); }

    friend bool operator==(const CompactLabel&, const CompactLabel&) = default;
};

using TableEntries = std::vector<std::pair<NodeId, NodeId>>; // (key, next hop), sorted by key

inline NodeId lookup(const TableEntries& entries, NodeId key) noexcept {
    const auto it = std::lower_bound(entries.begin(), entries.end(), key,
                                     [](const auto& e, NodeId k) { return e.first < k; });
    return (it != entries.end() && it->first == key) ? it->second : kNoNode;
}

struct RoutingTable {
    NodeId owner = kNoNode;
    /// One entry per landmark; a landmark's entry for itself points at itself.
    TableEntries landmark_entries;
    /// Destinations closer to the owner than to their own landmark, plus, on
    /// a landmark, every member of its cell.
    TableEntries vicinity_entries;

    std::size_t size() const noexcept { return landmark_entries.size() + vicinity_entries.size(); }
};

/// One-level landmark/vicinity routing scheme over a graph that must outlive it.
class CompactScheme {
public:
    const Graph& graph() const noexcept { return *graph_; }
    Metric metric() const noexcept { return metric_; }
    const LandmarkSet& landmarks() const noexcept { return landmarks_; }
    const RoutingTable& table(NodeId u) const { return tables_.at(u); }
    const CompactLabel& label(NodeId u) const { return labels_.at(u); }
    std::size_t node_count() const noexcept { return tables_.size(); }

    RoutePath route(NodeId source, const CompactLabel& dest) const;
    RoutePath route_to(NodeId source, NodeId dest) const { return route(source, label(dest)); }

    /// "node | landmark | table_size" per node, ordered by node id.
    std::string dump() const {
        std::string out;
        for (NodeId u = 0; u < tables_.size(); ++u)
            out += std::to_string(u) + " | " + std::to_string(labels_[u].landmark) + " | " +
                   std::to_string(tables_[u].size()) + "\n";
        return out;
    }

private:
    friend CompactScheme build_compact(const Graph&, LandmarkSet, Metric);

    const Graph* graph_ = nullptr;
    Metric metric_ = Metric::Hop;
    LandmarkSet landmarks_;
    std::vector<RoutingTable> tables_;
    std::vector<CompactLabel> labels_;
};

/// Builds tables from per-landmark shortest-path trees and, for each
/// destination t, a search from t bounded by the distance to t's landmark.
/// Next hops toward t all come from t's own search, so a node that stores t
/// always forwards to a node that stores t too.
inline CompactScheme build_compact(const Graph& graph, LandmarkSet landmarks, Metric metric) {
    const std::size_t n = graph.node_count();
    if (landmarks.nearest_landmark.size() != n || landmarks.landmark_distance.size() != n ||
        landmarks.members.empty())
        throw Error(ErrorCode::InvalidParameters, "landmark set does not match graph");

    CompactScheme scheme;
    scheme.graph_ = &graph;
    scheme.metric_ = metric;
    scheme.tables_.resize(n);
    scheme.labels_.resize(n);
    for (NodeId u = 0; u < n; ++u) {
        scheme.tables_[u].owner = u;
        scheme.tables_[u].landmark_entries.reserve(landmarks.members.size());
        scheme.labels_[u] = {u, landmarks.nearest_landmark[u]};
    }

    DijkstraWorkspace ws(graph);
    for (NodeId l : landmarks.members) {
        const NodeId sources[] = {l};
        ws.run(metric, sources);
        for (NodeId u = 0; u < n; ++u)
            scheme.tables_[u].landmark_entries.emplace_back(l, u == l ? l : ws.parent(u));
    }

    for (NodeId t = 0; t < n; ++t) {
        const NodeId home = landmarks.nearest_landmark[t];
        if (home == t)
            continue;
        const NodeId sources[] = {t};
        ws.run(metric, sources, [](NodeId) { return true; }, [&](NodeId u) { return u != home; });
        const double radius = ws.distance(home);
        for (NodeId u : ws.settled_order()) {
            if (u != t && ws.distance(u) < radius)
                scheme.tables_[u].vicinity_entries.emplace_back(t, ws.parent(u));
        }
        scheme.tables_[home].vicinity_entries.emplace_back(t, ws.parent(home));
    }

    scheme.landmarks_ = std::move(landmarks);
    return scheme;
}

inline RoutePath CompactScheme::route(NodeId source, const CompactLabel& dest) const {
    if (!graph_->contains(source))
        throw Error(ErrorCode::InvalidNode, "source " + std::to_string(source) + " out of range");
    if (!graph_->contains(dest.node) || labels_[dest.node] != dest)
        throw Error(ErrorCode::LabelMismatch, "label was not issued by this scheme");

    ForwardingTrace trace(*graph_, source);
    while (trace.current() != dest.node) {
        const RoutingTable& table = tables_[trace.current()];
        NodeId next = lookup(table.vicinity_entries, dest.node);
        if (next == kNoNode) {
            if (trace.current() == dest.landmark)
                throw Error(ErrorCode::ForwardingStuck, "landmark " + std::to_string(dest.landmark) +
                                                            " has no entry for " + std::to_string(dest.node));
            next = lookup(table.landmark_entries, dest.landmark);
        }
        trace.step(next);
    }
    return std::move(trace).finish();
}

inline RoutePath route_compact(const CompactScheme& scheme, NodeId source, const CompactLabel& dest) {
    return scheme.route(source, dest);
}

inline TableSizeSummary table_sizes(const CompactScheme& scheme) {
    std::vector<std::size_t> counts(scheme.node_count());
    for (NodeId u = 0; u < counts.size(); ++u)
        counts[u] = scheme.table(u).size();
    return TableSizeSummary::from_counts(std::move(counts));
}

} // namespace routelab
