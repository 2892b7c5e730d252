#pragma once

#include <routelab/error.hpp>
#include <routelab/graph.hpp>
#include <routelab/random.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace routelab {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        if (i > start)
            tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

template <class T>
bool parse_number(std::string_view token, T& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    if (first != last && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

} // namespace detail

/// Parses "u v rtt_weight" lines. Text after '#' is ignored. Arbitrary integer
/// ids are remapped to 0..n-1 in ascending order of the original id, so an
/// already-dense file keeps its ids.
inline Graph load_edge_list(std::string_view text) {
    struct RawEdge {
        std::int64_t u, v;
        double rtt;
    };
    std::vector<RawEdge> raw;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto tokens = detail::split_ws(line);
        if (tokens.empty())
            continue;
        const std::string where = "line " + std::to_string(line_no);
        if (tokens.size() != 3)
            throw Error(ErrorCode::MalformedLine, where + ": expected 'u v rtt_weight'");
        RawEdge e{};
        if (!detail::parse_number(tokens[0], e.u) || !detail::parse_number(tokens[1], e.v))
            throw Error(ErrorCode::MalformedLine, where + ": node ids must be integers");
        if (!detail::parse_number(tokens[2], e.rtt) || std::isnan(e.rtt) || std::isinf(e.rtt))
            throw Error(ErrorCode::MalformedLine, where + ": weight must be a finite real");
        if (!(e.rtt > 0.0))
            throw Error(ErrorCode::NonPositiveWeight, where + ": weight must be positive");
        if (e.u == e.v)
            throw Error(ErrorCode::SelfLoop, where + ": self-loop on node " + std::to_string(e.u));
        raw.push_back(e);
    }
    if (raw.empty())
        throw Error(ErrorCode::InvalidParameters, "edge list contains no edges");

    std::map<std::int64_t, NodeId> remap;
    for (const RawEdge& e : raw) {
        remap.emplace(e.u, 0);
        remap.emplace(e.v, 0);
    }
    NodeId next = 0;
    for (auto& [id, dense] : remap)
        dense = next++;

    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (const RawEdge& e : raw)
        edges.push_back({remap.at(e.u), remap.at(e.v), e.rtt});
    return Graph::from_edges(remap.size(), std::move(edges));
}

/// Emits the edge-list format read by load_edge_list. Weights use the
/// shortest round-trip representation, so load(write(g)) == g bit for bit.
inline std::string write_edge_list(const Graph& graph) {
    std::string out = "# routelab edge list: " + std::to_string(graph.node_count()) + " nodes, " +
                      std::to_string(graph.edge_count()) + " edges\n";
    for (const Edge& e : graph.edges()) {
        out += std::to_string(e.u);
        out += ' ';
        out += std::to_string(e.v);
        out += ' ';
        out += detail::format_double(e.rtt);
        out += '\n';
    }
    return out;
}

/// Preferential attachment: a clique on attach_m + 1 nodes, then every new
/// node links to attach_m distinct existing nodes drawn proportionally to
/// degree. All rtt weights are 1.
inline Graph generate_scale_free(std::size_t n, std::size_t attach_m, std::uint64_t seed) {
    if (attach_m < 1 || n < attach_m + 1)
        throw Error(ErrorCode::InvalidParameters, "scale-free generator needs attach_m >= 1 and n >= attach_m + 1");

    Rng rng(derive_seed(seed, 0x5ca1ef));
    std::vector<Edge> edges;
    // Every edge contributes both endpoints, so uniform draws from this pool
    // are degree-proportional.
    std::vector<NodeId> pool;
    for (NodeId u = 0; u <= attach_m; ++u) {
        for (NodeId v = u + 1; v <= attach_m; ++v) {
            edges.push_back({u, v, 1.0});
            pool.push_back(u);
            pool.push_back(v);
        }
    }
    std::vector<NodeId> chosen;
    for (NodeId v = static_cast<NodeId>(attach_m + 1); v < n; ++v) {
        chosen.clear();
        while (chosen.size() < attach_m) {
            const NodeId pick = pool[rng.index(pool.size())];
            if (std::find(chosen.begin(), chosen.end(), pick) == chosen.end())
                chosen.push_back(pick);
        }
        for (NodeId target : chosen) {
            edges.push_back({target, v, 1.0});
            pool.push_back(target);
            pool.push_back(v);
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

/// Radius at which a random geometric graph on n uniform points in the unit
/// square is connected with high probability; `factor` scales the classic
/// sqrt(ln n / (pi n)) threshold.
inline double geometric_connectivity_radius(std::size_t n, double factor = 1.3) {
    const double nn = static_cast<double>(std::max<std::size_t>(n, 2));
    return factor * std::sqrt(std::log(nn) / (std::numbers::pi * nn));
}

inline constexpr int kGeometricMaxAttempts = 100;

/// Uniform points in the unit square, an edge for every pair within `radius`,
/// weighted by Euclidean distance. Disconnected placements are redrawn whole,
/// up to kGeometricMaxAttempts times.
inline Graph generate_geometric(std::size_t n, double radius, std::uint64_t seed) {
    if (n < 2 || !(radius > 0.0) || std::isinf(radius))
        throw Error(ErrorCode::InvalidParameters, "geometric generator needs n >= 2 and a positive radius");

    Rng rng(derive_seed(seed, 0x6e0));
    std::vector<double> xs(n), ys(n);
    for (int attempt = 0; attempt < kGeometricMaxAttempts; ++attempt) {
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = rng.unit();
            ys[i] = rng.unit();
        }
        std::vector<Edge> edges;
        bool coincident = false;
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = u + 1; v < n; ++v) {
                const double dx = xs[u] - xs[v];
                const double dy = ys[u] - ys[v];
                const double dist = std::sqrt(dx * dx + dy * dy);
                if (dist <= radius) {
                    coincident = coincident || dist == 0.0;
                    edges.push_back({u, v, dist});
                }
            }
        }
        if (coincident || edges.size() + 1 < n)
            continue;
        try {
            return Graph::from_edges(n, std::move(edges));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DisconnectedGraph)
                throw;
        }
    }
    throw Error(ErrorCode::CouldNotConnect, "no connected placement within " +
                                                std::to_string(kGeometricMaxAttempts) + " attempts");
}

struct TwoLevelTopology {
    Graph graph;
    std::vector<std::uint32_t> domain_of;
};

inline constexpr double kIntraDomainMinRtt = 0.1;
inline constexpr double kIntraDomainMaxRtt = 1.0;
inline constexpr double kInterDomainMinRtt = 10.0;
inline constexpr double kInterDomainMaxRtt = 100.0;

/// AS-like topology: `domain_count` internally connected random domains of
/// `nodes_per_domain` members (ids j*k .. j*k+k-1 for domain j), joined by
/// `inter_edges` border links whose domain overlay is connected. Intra-domain
/// weights lie in [0.1, 1), border weights in [10, 100).
inline TwoLevelTopology generate_two_level(std::size_t domain_count, std::size_t nodes_per_domain,
                                           std::size_t inter_edges, std::uint64_t seed) {
    const std::size_t d = domain_count;
    const std::size_t k = nodes_per_domain;
    if (d < 1 || k < 1)
        throw Error(ErrorCode::InvalidParameters, "domain_count and nodes_per_domain must be >= 1");
    if (inter_edges + 1 < d)
        throw Error(ErrorCode::InvalidParameters, "inter_edges must be >= domain_count - 1");
    const std::size_t max_inter = d * (d - 1) / 2 * k * k;
    if (inter_edges > max_inter)
        throw Error(ErrorCode::InvalidParameters, "more inter-domain edges requested than node pairs exist");

    Rng rng(derive_seed(seed, 0x2137));
    std::set<std::pair<NodeId, NodeId>> present;
    std::vector<Edge> edges;
    auto add = [&](NodeId a, NodeId b, double w) {
        const auto key = std::minmax(a, b);
        if (a == b || !present.insert(key).second)
            return false;
        edges.push_back({a, b, w});
        return true;
    };

    TwoLevelTopology out;
    out.domain_of.resize(d * k);
    for (std::size_t j = 0; j < d; ++j) {
        const auto base = static_cast<NodeId>(j * k);
        for (std::size_t i = 0; i < k; ++i)
            out.domain_of[base + i] = static_cast<std::uint32_t>(j);
        // random recursive tree, then k/2 chords
        for (std::size_t i = 1; i < k; ++i)
            add(base + static_cast<NodeId>(i), base + static_cast<NodeId>(rng.index(i)),
                rng.uniform(kIntraDomainMinRtt, kIntraDomainMaxRtt));
        for (std::size_t extra = 0; extra < k / 2; ++extra) {
            const auto a = base + static_cast<NodeId>(rng.index(k));
            const auto b = base + static_cast<NodeId>(rng.index(k));
            add(a, b, rng.uniform(kIntraDomainMinRtt, kIntraDomainMaxRtt));
        }
    }

    auto member = [&](std::size_t domain) {
        return static_cast<NodeId>(domain * k + rng.index(k));
    };
    std::size_t placed = 0;
    for (std::size_t j = 1; j < d; ++j) {
        const std::size_t other = rng.index(j);
        while (!add(member(j), member(other), rng.uniform(kInterDomainMinRtt, kInterDomainMaxRtt))) {
        }
        ++placed;
    }
    while (placed < inter_edges) {
        const std::size_t a = rng.index(d);
        const std::size_t b = rng.index(d);
        if (a == b)
            continue;
        if (add(member(a), member(b), rng.uniform(kInterDomainMinRtt, kInterDomainMaxRtt)))
            ++placed;
    }

    out.graph = Graph::from_edges(d * k, std::move(edges));
    return out;
}

struct OceanTopology {
    Graph graph;
    Edge short_bridge; // rtt = bridge_weight
    Edge long_bridge;  // rtt = 2 * bridge_weight
};

/// Two unit-weight cliques (ids 0..c-1 and c..2c-1) joined by two bridges
/// with distinct endpoints on both sides: one of weight bridge_weight and one
/// of twice that. The seed only picks the bridge endpoints.
inline OceanTopology generate_ocean(std::size_t cluster_size, double bridge_weight, std::uint64_t seed) {
    if (cluster_size < 3 || !(bridge_weight >= 10.0) || std::isinf(bridge_weight))
        throw Error(ErrorCode::InvalidParameters, "ocean generator needs cluster_size >= 3 and bridge_weight >= 10");

    const auto c = static_cast<NodeId>(cluster_size);
    Rng rng(derive_seed(seed, 0x0cea));
    auto distinct_pair = [&](NodeId offset) {
        const auto a = static_cast<NodeId>(rng.index(c));
        auto b = static_cast<NodeId>(rng.index(c - 1));
        if (b >= a)
            ++b;
        return std::pair<NodeId, NodeId>{offset + a, offset + b};
    };
    const auto [a_short, a_long] = distinct_pair(0);
    const auto [b_short, b_long] = distinct_pair(c);

    std::vector<Edge> edges;
    for (NodeId side : {NodeId{0}, c})
        for (NodeId u = 0; u < c; ++u)
            for (NodeId v = u + 1; v < c; ++v)
                edges.push_back({side + u, side + v, 1.0});
    OceanTopology out;
    out.short_bridge = {a_short, b_short, bridge_weight};
    out.long_bridge = {a_long, b_long, 2.0 * bridge_weight};
    edges.push_back(out.short_bridge);
    edges.push_back(out.long_bridge);
    out.graph = Graph::from_edges(2 * cluster_size, std::move(edges));
    return out;
}

} // namespace routelab
