// Randomized invariant checks over many small graphs of mixed shape.

#include <routelab/routelab.hpp>

#include <oracles.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace routelab;
namespace rt = routelab::testing;

namespace {

constexpr int kCases = 60;

// Random connected graph: a random tree, then extra chords, weights spread
// over three decades so RTT and HOP shortest paths differ.
Graph random_graph(Rng& rng) {
    const std::size_t n = 2 + rng.index(70);
    std::vector<Edge> edges;
    std::set<std::pair<NodeId, NodeId>> seen;
    auto add = [&](NodeId a, NodeId b) {
        if (a == b)
            return;
        const auto key = std::minmax(a, b);
        if (seen.insert(key).second)
            edges.push_back({a, b, std::pow(10.0, rng.uniform(-1.0, 2.0))});
    };
    for (NodeId v = 1; v < n; ++v)
        add(v, static_cast<NodeId>(rng.index(v)));
    const std::size_t extra = rng.index(2 * n);
    for (std::size_t i = 0; i < extra; ++i)
        add(static_cast<NodeId>(rng.index(n)), static_cast<NodeId>(rng.index(n)));
    return Graph::from_edges(n, edges);
}

// Mix of the hand-rolled family and the library generators.
Graph any_graph(Rng& rng, int i) {
    switch (i % 4) {
    case 0:
        return random_graph(rng);
    case 1:
        return generate_scale_free(4 + rng.index(120), 1 + rng.index(3), rng.next());
    case 2: {
        const std::size_t n = 16 + rng.index(150);
        return generate_geometric(n, geometric_connectivity_radius(n, 1.6), rng.next());
    }
    default: {
        const std::size_t domains = 1 + rng.index(5);
        const std::size_t inter = domains == 1 ? 0 : domains - 1 + rng.index(domains);
        return generate_two_level(domains, 3 + rng.index(8), inter, rng.next()).graph;
    }
    }
}

template <class Scheme>
void check_routes(const Scheme& scheme, const DistanceOracle& d, double max_stretch) {
    const Graph& g = scheme.graph();
    for (NodeId s = 0; s < g.node_count(); ++s) {
        for (NodeId t = 0; t < g.node_count(); ++t) {
            const RoutePath p = scheme.route_to(s, t);
            ASSERT_EQ(p.nodes.front(), s);
            ASSERT_EQ(p.nodes.back(), t);
            std::set<NodeId> unique(p.nodes.begin(), p.nodes.end());
            ASSERT_EQ(unique.size(), p.nodes.size());
            double rtt = 0.0;
            for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
                ASSERT_TRUE(g.adjacent(p.nodes[i], p.nodes[i + 1]));
                rtt += g.rtt(p.nodes[i], p.nodes[i + 1]);
            }
            ASSERT_EQ(p.cost_hop, p.nodes.size() - 1);
            ASSERT_TRUE(rt::rel_equal(rtt, p.cost_rtt));
            if (s != t) {
                const double stretch = p.cost(scheme.metric()) / d(s, t);
                ASSERT_GE(stretch, 1.0 - 1e-9);
                ASSERT_LE(stretch, max_stretch * (1 + 1e-9)) << s << "->" << t;
            }
        }
    }
}

} // namespace

TEST(Properties, EdgeListRoundTrip) {
    Rng rng(101);
    for (int i = 0; i < kCases; ++i) {
        const Graph g = any_graph(rng, i);
        EXPECT_EQ(load_edge_list(write_edge_list(g)), g);
    }
}

TEST(Properties, ShortestPathsAgreeWithBellmanFord) {
    Rng rng(202);
    for (int i = 0; i < kCases; ++i) {
        const Graph g = any_graph(rng, i);
        const Metric metric = i % 2 ? Metric::Rtt : Metric::Hop;
        const auto s = static_cast<NodeId>(rng.index(g.node_count()));
        const DistanceMap d = sssp(g, s, metric);
        const auto ref = rt::bellman_ford(g, s, metric);
        for (NodeId v = 0; v < g.node_count(); ++v) {
            ASSERT_TRUE(rt::rel_equal(d.distance[v], ref[v]));
            double walk = 0.0;
            const auto path = d.path_to_source(v);
            for (std::size_t k = 0; k + 1 < path.size(); ++k)
                walk += metric_weight(g.rtt(path[k], path[k + 1]), metric);
            ASSERT_TRUE(rt::rel_equal(walk, d.distance[v]));
        }
        for (const Edge& e : g.edges())
            ASSERT_LE(std::abs(d.distance[e.u] - d.distance[e.v]), metric_weight(e.rtt, metric) * (1 + 1e-9));
    }
}

TEST(Properties, PartitionsAreConnectedAndExhaustive) {
    Rng rng(303);
    for (int i = 0; i < kCases; ++i) {
        const Graph g = any_graph(rng, i);
        const std::size_t count = 1 + rng.index(g.node_count());
        const LandmarkSet L = select_landmarks(g, count, LandmarkStrategy::Uniform, rng.next(), Metric::Rtt);
        std::size_t total = 0;
        for (NodeId l : L.members) {
            std::vector<NodeId> cell;
            for (NodeId v = 0; v < g.node_count(); ++v)
                if (L.nearest_landmark[v] == l)
                    cell.push_back(v);
            total += cell.size();
            ASSERT_TRUE(rt::induces_connected(g, cell));
        }
        ASSERT_EQ(total, g.node_count());
    }
}

TEST(Properties, CompactStretchThreeLoopFree) {
    Rng rng(404);
    for (int i = 0; i < kCases; ++i) {
        const Graph g = any_graph(rng, i);
        const Metric metric = i % 3 ? Metric::Rtt : Metric::Hop;
        const std::size_t count = 1 + rng.index(std::min<std::size_t>(g.node_count(), 12));
        const auto strategy = i % 2 ? LandmarkStrategy::HighDegree : LandmarkStrategy::Uniform;
        const CompactScheme s = build_compact(g, select_landmarks(g, count, strategy, rng.next(), metric), metric);
        check_routes(s, all_pairs(g, metric), 3.0);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            ASSERT_EQ(s.table(u).landmark_entries.size(), s.landmarks().members.size());
            for (const auto& [key, hop] : s.table(u).vicinity_entries)
                ASSERT_TRUE(g.adjacent(u, hop));
        }
    }
}

TEST(Properties, StackedLoopFreeAndTreesValid) {
    Rng rng(505);
    for (int i = 0; i < kCases; ++i) {
        const Graph g = any_graph(rng, i);
        const Metric metric = i % 2 ? Metric::Rtt : Metric::Hop;
        const std::size_t n = g.node_count();
        const StackedScheme s = i % 3 == 0 ? build_hierarchical(g, 2 + rng.index(6), metric, rng.next())
                                           : build_stacked(g, n >= 16 && i % 3 == 2 ? 2 : (n >= 4 ? 1 : 0),
                                                           metric, rng.next());
        check_routes(s, all_pairs(g, metric), std::numeric_limits<double>::infinity());

        const PartitionTree& tree = s.tree();
        for (std::size_t l = 1; l <= tree.depth(); ++l) {
            std::size_t covered = 0;
            for (const Cluster& c : tree.level(l)) {
                covered += c.members.size();
                ASSERT_TRUE(rt::induces_connected(g, c.members));
            }
            ASSERT_EQ(covered, n);
        }
        const unsigned d = static_cast<unsigned>(s.depth());
        for (NodeId u = 0; u < n; ++u)
            ASSERT_LE(s.label_bits(u), 2 * ceil_log2(n) + d * ceil_log2(d));
    }
}

TEST(Properties, ExactSchemeMatchesOracle) {
    Rng rng(606);
    for (int i = 0; i < kCases; ++i) {
        const Graph g = any_graph(rng, i);
        const Metric metric = i % 2 ? Metric::Rtt : Metric::Hop;
        const DistanceOracle d = all_pairs(g, metric);
        const StackedScheme s = build_stacked(g, 0, metric, 1);
        for (NodeId u = 0; u < g.node_count(); ++u)
            for (NodeId t = 0; t < g.node_count(); ++t)
                ASSERT_TRUE(rt::rel_equal(s.route_to(u, t).cost(metric), d(u, t)));
    }
}

TEST(Properties, BuildsAreDeterministic) {
    Rng rng(707);
    for (int i = 0; i < 20; ++i) {
        const Graph g = any_graph(rng, i);
        const std::uint64_t seed = rng.next();
        const auto compact = [&] {
            return build_compact(g, select_landmarks(g, 1 + g.node_count() / 4, LandmarkStrategy::Uniform, seed,
                                                     Metric::Rtt),
                                 Metric::Rtt)
                .dump();
        };
        EXPECT_EQ(compact(), compact());
        EXPECT_EQ(build_hierarchical(g, 3, Metric::Hop, seed).dump(), build_hierarchical(g, 3, Metric::Hop, seed).dump());
    }
}

TEST(Properties, SampledAllEqualsExhaustive) {
    Rng rng(808);
    for (int i = 0; i < 10; ++i) {
        const Graph g = any_graph(rng, i);
        const std::size_t n = g.node_count();
        const CompactScheme s =
            build_compact(g, select_landmarks(g, 1 + n / 5, LandmarkStrategy::Uniform, 3, Metric::Hop), Metric::Hop);
        const DistanceOracle d = all_pairs(g, Metric::Hop);
        const StretchStats a = stretch_distribution(s, PairSample::exhaustive(n), d);
        const StretchStats b = stretch_distribution(s, PairSample::sampled(n, n * n, 77), d);
        EXPECT_EQ(a.sorted, b.sorted);
        EXPECT_EQ(a.mean, b.mean);
    }
}
