#pragma once

#include <routelab/error.hpp>
#include <routelab/graph.hpp>
#include <routelab/random.hpp>
#include <routelab/route_path.hpp>
#include <routelab/shortest_path.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace routelab {

// ---------------------------------------------------------------------------
// Size and stretch predictions for recursive compactization.
// ---------------------------------------------------------------------------

namespace detail {

/// base^exp, or max() if the result exceeds `limit`.
constexpr std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t limit) noexcept {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t result = 1;
    for (std::uint64_t e = 0; e < exp; ++e) {
        if (base != 0 && result > limit / base)
            return kMax;
        result *= base;
        if (result > limit)
            return kMax;
    }
    return result;
}

} // namespace detail

/// Smallest b >= 1 with b^depth >= n (integer ceil of the depth-th root).
constexpr std::uint64_t ceil_root(std::uint64_t n, std::uint64_t depth) noexcept {
    if (n <= 1 || depth == 0)
        return 1;
    std::uint64_t lo = 1, hi = n; // hi^depth >= n always
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (detail::saturating_pow(mid, depth, n) >= n)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

/// Smallest d >= 0 with base^d >= n. `base` must be >= 2.
constexpr std::uint64_t ceil_log(std::uint64_t n, std::uint64_t base) noexcept {
    std::uint64_t d = 0;
    std::uint64_t power = 1;
    while (power < n) {
        ++d;
        power = power > n / base ? n : power * base;
    }
    return d;
}

/// ceil(2^i * N^(1/2^i)): total entries per node when every one of the 2^i
/// tables holds N^(1/2^i) entries. Level 0 is the plain full table.
inline std::uint64_t predicted_table_total(std::uint64_t n, unsigned level) {
    if (level == 0)
        return n;
    if (level > 6) {
        const long double tables = std::ldexp(1.0L, static_cast<int>(level));
        return static_cast<std::uint64_t>(
            std::ceil(tables * std::pow(static_cast<long double>(n), 1.0L / tables)));
    }
    // exact: smallest x with (x / D)^D >= N, i.e. x^D >= N * D^D
    using boost::multiprecision::cpp_int;
    const unsigned depth = 1u << level;
    const cpp_int target = cpp_int(n) * boost::multiprecision::pow(cpp_int(depth), depth);
    const long double guess =
        static_cast<long double>(depth) * std::pow(static_cast<long double>(n), 1.0L / depth);
    auto x = static_cast<std::uint64_t>(std::max(0.0L, std::floor(guess) - 2.0L));
    while (boost::multiprecision::pow(cpp_int(x), depth) < target)
        ++x;
    return x;
}

/// 3^i: one factor of 3 per compactization level.
constexpr std::uint64_t predicted_stretch_bound(unsigned level) noexcept {
    std::uint64_t bound = 1;
    for (unsigned i = 0; i < level; ++i)
        bound *= 3;
    return bound;
}

/// Smallest i with N^(1/2^i) <= k.
constexpr unsigned min_depth_for_threshold(std::uint64_t n, std::uint64_t k) noexcept {
    unsigned level = 0;
    // k^(2^i) by repeated squaring, saturating once it passes n
    std::uint64_t reach = k;
    while (reach < n) {
        ++level;
        reach = reach > n / reach ? n : reach * reach;
    }
    return level;
}

/// k * log_k N: total state of a branching-k hierarchy.
inline double predicted_hierarchical_total(std::uint64_t n, std::uint64_t k) {
    return static_cast<double>(k) * std::log(static_cast<double>(n)) / std::log(static_cast<double>(k));
}

// ---------------------------------------------------------------------------
// Partition tree
// ---------------------------------------------------------------------------

struct Cluster {
    NodeId landmark = kNoNode;        // kNoNode for the root
    std::uint32_t parent = 0;         // index at the previous level
    std::uint32_t digit = 0;          // position among the parent's children
    std::vector<NodeId> members;      // sorted
    std::vector<std::uint32_t> children;

    friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Recursive partition: level 0 is a single root cluster, each later level
/// refines the previous one, and the deepest level splits into single nodes.
/// Every cluster induces a connected subgraph.
class PartitionTree {
public:
    std::size_t depth() const noexcept { return levels_.size() - 1; }
    std::size_t branching() const noexcept { return branching_; }
    std::size_t node_count() const noexcept { return cluster_of_.empty() ? 0 : cluster_of_[0].size(); }

    std::span<const Cluster> level(std::size_t l) const { return levels_.at(l); }
    const Cluster& cluster(std::size_t l, std::uint32_t index) const { return levels_.at(l).at(index); }
    std::uint32_t cluster_of(std::size_t l, NodeId u) const { return cluster_of_.at(l).at(u); }
    std::span<const std::uint32_t> assignment(std::size_t l) const { return cluster_of_.at(l); }

    /// Child digit of u at level l (1..depth).
    std::uint32_t digit(std::size_t l, NodeId u) const { return levels_[l][cluster_of_[l][u]].digit; }

    /// Number of clusters sharing u's parent at level l, u's own included.
    std::size_t sibling_count(std::size_t l, NodeId u) const {
        return levels_[l - 1][cluster_of_[l - 1][u]].children.size();
    }

    friend bool operator==(const PartitionTree&, const PartitionTree&) = default;

private:
    friend PartitionTree build_partition_tree(const Graph&, std::size_t, std::size_t, Metric, std::uint64_t);

    std::size_t branching_ = 0;
    std::vector<std::vector<Cluster>> levels_;
    std::vector<std::vector<std::uint32_t>> cluster_of_;
};

/// Builds a depth-`depth` tree. Levels 1..depth-1 split every cluster into the
/// shortest-path Voronoi cells (confined to the cluster) of min(branching,
/// size) uniformly sampled members; the last level splits into singletons.
/// Sampling for a cluster is seeded by (seed, level, cluster index) only.
inline PartitionTree build_partition_tree(const Graph& graph, std::size_t depth, std::size_t branching,
                                          Metric metric, std::uint64_t seed) {
    if (depth < 1)
        throw Error(ErrorCode::InvalidDepth, "partition tree needs depth >= 1");
    const std::size_t n = graph.node_count();

    PartitionTree tree;
    tree.branching_ = branching;
    tree.levels_.resize(depth + 1);
    tree.cluster_of_.assign(depth + 1, std::vector<std::uint32_t>(n, 0));
    Cluster root;
    root.members.resize(n);
    std::iota(root.members.begin(), root.members.end(), NodeId{0});
    tree.levels_[0].push_back(std::move(root));

    DijkstraWorkspace ws(graph);
    for (std::size_t l = 1; l <= depth; ++l) {
        auto& parents = tree.levels_[l - 1];
        auto& level = tree.levels_[l];
        const auto& parent_of = tree.cluster_of_[l - 1];
        for (std::uint32_t p = 0; p < parents.size(); ++p) {
            const std::vector<NodeId>& members = parents[p].members;
            std::vector<NodeId> landmarks;
            if (l == depth || members.size() <= branching) {
                landmarks = members;
            } else {
                landmarks = members;
                Rng rng(derive_seed(seed, (std::uint64_t{l} << 32) | p));
                for (std::size_t i = 0; i < branching; ++i)
                    std::swap(landmarks[i], landmarks[i + rng.index(landmarks.size() - i)]);
                landmarks.resize(branching);
                std::sort(landmarks.begin(), landmarks.end());
            }

            const auto first = static_cast<std::uint32_t>(level.size());
            for (std::uint32_t d = 0; d < landmarks.size(); ++d) {
                Cluster child;
                child.landmark = landmarks[d];
                child.parent = p;
                child.digit = d;
                parents[p].children.push_back(first + d);
                level.push_back(std::move(child));
            }
            if (landmarks.size() == members.size()) {
                for (std::uint32_t d = 0; d < landmarks.size(); ++d) {
                    level[first + d].members.push_back(landmarks[d]);
                    tree.cluster_of_[l][landmarks[d]] = first + d;
                }
                continue;
            }
            ws.run(metric, landmarks, [&](NodeId v) { return parent_of[v] == p; }, [](NodeId) { return true; });
            for (NodeId v : members) {
                const auto d = static_cast<std::uint32_t>(
                    std::lower_bound(landmarks.begin(), landmarks.end(), ws.owner(v)) - landmarks.begin());
                level[first + d].members.push_back(v);
                tree.cluster_of_[l][v] = first + d;
            }
        }
    }
    return tree;
}

// ---------------------------------------------------------------------------
// Stacked / hierarchical routing scheme
// ---------------------------------------------------------------------------

/// Cluster digit at every level, terminated by the node id.
struct HierarchicalLabel {
    std::vector<std::uint32_t> digits; // levels 1..depth
    NodeId node = kNoNode;

    friend bool operator==(const HierarchicalLabel&, const HierarchicalLabel&) = default;
};

struct StackedConstruction {
    unsigned level; // i: depth 2^i
};
struct HierarchicalConstruction {
    std::size_t branching; // k: depth ceil(log_k N)
};
using SchemeConstruction = std::variant<StackedConstruction, HierarchicalConstruction>;

/// Per-node, per-level routing over a partition tree. At level l a node keeps
/// one next hop per child of its level-(l-1) cluster, pointing along a
/// shortest path confined to that cluster toward the child's landmark.
class StackedScheme {
public:
    const Graph& graph() const noexcept { return *graph_; }
    Metric metric() const noexcept { return metric_; }
    const PartitionTree& tree() const noexcept { return tree_; }
    const SchemeConstruction& construction() const noexcept { return construction_; }
    std::size_t depth() const noexcept { return tree_.depth(); }
    std::size_t node_count() const noexcept { return graph_->node_count(); }

    /// Next hops of u at level l, indexed by child digit.
    std::span<const NodeId> level_table(std::size_t l, NodeId u) const {
        const auto& offsets = offsets_.at(l - 1);
        return {next_hops_[l - 1].data() + offsets[u], offsets[u + 1] - offsets[u]};
    }

    std::size_t table_size(NodeId u) const {
        std::size_t total = 0;
        for (std::size_t l = 1; l <= depth(); ++l)
            total += level_table(l, u).size();
        return total;
    }

    HierarchicalLabel label(NodeId u) const {
        HierarchicalLabel out;
        out.node = u;
        out.digits.reserve(depth());
        for (std::size_t l = 1; l <= depth(); ++l)
            out.digits.push_back(tree_.digit(l, u));
        return out;
    }

    /// Bits for the digits above the leaf level plus a full node id.
    unsigned label_bits(NodeId u) const {
        unsigned bits = ceil_log2(node_count());
        for (std::size_t l = 1; l < depth(); ++l)
            bits += ceil_log2(tree_.sibling_count(l, u));
        return bits;
    }

    /// Size the construction predicts: 2^i N^(1/2^i) or k log_k N.
    double predicted_total() const {
        if (const auto* s = std::get_if<StackedConstruction>(&construction_))
            return static_cast<double>(predicted_table_total(node_count(), s->level));
        return predicted_hierarchical_total(node_count(), std::get<HierarchicalConstruction>(construction_).branching);
    }

    /// Heuristic stretch expectation, 3^i = D^(log2 3) for depth D.
    double nominal_stretch_bound() const {
        if (const auto* s = std::get_if<StackedConstruction>(&construction_))
            return static_cast<double>(predicted_stretch_bound(s->level));
        return std::pow(static_cast<double>(depth()), std::log2(3.0));
    }

    RoutePath route(NodeId source, const HierarchicalLabel& dest) const;
    RoutePath route_to(NodeId source, NodeId dest) const { return route(source, label(dest)); }

    /// "node | level-path | per-level table sizes" per node, ordered by node id.
    std::string dump() const {
        std::string out;
        for (NodeId u = 0; u < node_count(); ++u) {
            out += std::to_string(u) + " | ";
            for (std::size_t l = 1; l <= depth(); ++l) {
                if (l > 1)
                    out += '.';
                out += std::to_string(tree_.digit(l, u));
            }
            out += " | ";
            for (std::size_t l = 1; l <= depth(); ++l) {
                if (l > 1)
                    out += ',';
                out += std::to_string(level_table(l, u).size());
            }
            out += '\n';
        }
        return out;
    }

private:
    friend StackedScheme build_partition_scheme(const Graph&, std::size_t, std::size_t, Metric, std::uint64_t,
                                                SchemeConstruction);

    const Graph* graph_ = nullptr;
    Metric metric_ = Metric::Hop;
    PartitionTree tree_;
    SchemeConstruction construction_;
    std::vector<std::vector<std::size_t>> offsets_;  // per level, per node
    std::vector<std::vector<NodeId>> next_hops_;     // per level, flat
};

inline StackedScheme build_partition_scheme(const Graph& graph, std::size_t depth, std::size_t branching,
                                            Metric metric, std::uint64_t seed, SchemeConstruction construction) {
    const std::size_t n = graph.node_count();
    StackedScheme scheme;
    scheme.graph_ = &graph;
    scheme.metric_ = metric;
    scheme.construction_ = construction;
    scheme.tree_ = build_partition_tree(graph, depth, branching, metric, seed);
    const PartitionTree& tree = scheme.tree_;

    scheme.offsets_.resize(depth);
    scheme.next_hops_.resize(depth);
    DijkstraWorkspace ws(graph);
    for (std::size_t l = 1; l <= depth; ++l) {
        auto& offsets = scheme.offsets_[l - 1];
        auto& hops = scheme.next_hops_[l - 1];
        offsets.assign(n + 1, 0);
        for (NodeId u = 0; u < n; ++u)
            offsets[u + 1] = offsets[u] + tree.sibling_count(l, u);
        hops.assign(offsets[n], kNoNode);

        const auto parent_of = tree.assignment(l - 1);
        for (const Cluster& child : tree.level(l)) {
            const std::uint32_t parent = child.parent;
            const NodeId sources[] = {child.landmark};
            ws.run(metric, sources, [&](NodeId v) { return parent_of[v] == parent; },
                   [](NodeId) { return true; });
            for (NodeId u : tree.cluster(l - 1, parent).members)
                hops[offsets[u] + child.digit] = u == child.landmark ? u : ws.parent(u);
        }
    }
    return scheme;
}

/// Recursive compactization at level i: depth 2^i, branching ceil(N^(1/2^i)).
inline StackedScheme build_stacked(const Graph& graph, unsigned level, Metric metric, std::uint64_t seed) {
    const std::size_t n = graph.node_count();
    if (level > 6)
        throw Error(ErrorCode::InvalidDepth, "stacking level " + std::to_string(level) + " is too deep");
    const std::size_t depth = std::size_t{1} << level;
    // N^(1/2^i) >= 2  <=>  N >= 2^(2^i)
    if (depth >= 64 || n < (std::uint64_t{1} << depth))
        throw Error(ErrorCode::InvalidDepth, "N^(1/2^i) < 2 for N=" + std::to_string(n) +
                                                 ", i=" + std::to_string(level));
    return build_partition_scheme(graph, depth, ceil_root(n, depth), metric, seed, StackedConstruction{level});
}

/// Classic hierarchy: fixed branching k, depth ceil(log_k N).
inline StackedScheme build_hierarchical(const Graph& graph, std::size_t branching, Metric metric,
                                        std::uint64_t seed) {
    if (branching < 2)
        throw Error(ErrorCode::InvalidParameters, "hierarchical branching must be >= 2");
    const std::size_t depth = std::max<std::size_t>(1, ceil_log(graph.node_count(), branching));
    return build_partition_scheme(graph, depth, branching, metric, seed, HierarchicalConstruction{branching});
}

/// Longest-common-prefix forwarding: at u, find the first level where u's
/// cluster differs from the destination's and take u's entry for the
/// destination's cluster at that level.
inline RoutePath StackedScheme::route(NodeId source, const HierarchicalLabel& dest) const {
    if (!graph_->contains(source))
        throw Error(ErrorCode::InvalidNode, "source " + std::to_string(source) + " out of range");
    if (!graph_->contains(dest.node) || dest.digits.size() != depth() || label(dest.node) != dest)
        throw Error(ErrorCode::LabelMismatch, "label was not issued by this scheme");

    ForwardingTrace trace(*graph_, source);
    while (trace.current() != dest.node) {
        const NodeId u = trace.current();
        std::size_t l = 1;
        while (l <= depth() && tree_.digit(l, u) == dest.digits[l - 1])
            ++l;
        if (l > depth())
            throw Error(ErrorCode::ForwardingStuck, "node " + std::to_string(u) + " matches every digit of " +
                                                        std::to_string(dest.node));
        const auto table = level_table(l, u);
        if (dest.digits[l - 1] >= table.size())
            throw Error(ErrorCode::LabelMismatch, "digit out of range at level " + std::to_string(l));
        trace.step(table[dest.digits[l - 1]]);
    }
    return std::move(trace).finish();
}

inline RoutePath route_stacked(const StackedScheme& scheme, NodeId source, const HierarchicalLabel& dest) {
    return scheme.route(source, dest);
}

inline TableSizeSummary table_sizes(const StackedScheme& scheme) {
    std::vector<std::size_t> counts(scheme.node_count());
    for (NodeId u = 0; u < counts.size(); ++u)
        counts[u] = scheme.table_size(u);
    return TableSizeSummary::from_counts(std::move(counts));
}

} // namespace routelab
