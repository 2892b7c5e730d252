#include <routelab/compact.hpp>
#include <routelab/metrics.hpp>
#include <routelab/stacked.hpp>
#include <routelab/topology.hpp>

#include <oracles.hpp>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

using namespace routelab;
namespace rt = routelab::testing;

constexpr std::uint64_t k2pow32 = std::uint64_t{1} << 32;

TEST(Formulas, PredictedTableTotal) {
    EXPECT_EQ(predicted_table_total(12345, 0), 12345u);
    EXPECT_EQ(predicted_table_total(k2pow32, 2), 1024u);
    EXPECT_EQ(predicted_table_total(1 << 16, 1), 512u);
    EXPECT_EQ(predicted_table_total(1 << 12, 2), 32u);
    // ceil(2 * sqrt(1000)) = ceil(63.245...)
    EXPECT_EQ(predicted_table_total(1000, 1), 64u);
    EXPECT_EQ(predicted_table_total(1, 3), 8u);
}

TEST(Formulas, StretchBound) {
    EXPECT_EQ(predicted_stretch_bound(0), 1u);
    EXPECT_EQ(predicted_stretch_bound(1), 3u);
    EXPECT_EQ(predicted_stretch_bound(2), 9u);
    EXPECT_EQ(predicted_stretch_bound(4), 81u);
}

TEST(Formulas, MinDepth) {
    EXPECT_EQ(min_depth_for_threshold(k2pow32, 256), 2u);
    EXPECT_EQ(min_depth_for_threshold(300, 300), 0u);
    EXPECT_EQ(min_depth_for_threshold(1 << 16, 256), 1u);
    EXPECT_EQ(min_depth_for_threshold((1 << 16) + 1, 256), 2u);
    EXPECT_EQ(min_depth_for_threshold(k2pow32, 2), 5u);
}

// 2^i * N^(1/2^i) = k * log_k N with k = N^(1/2^i); for N = 2^32 both sides
// reduce to powers of two, so compare in exact integers.
TEST(Formulas, StackedEqualsHierarchicalIdentity) {
    using boost::multiprecision::cpp_int;
    for (unsigned i = 1; i <= 3; ++i) {
        const unsigned tables = 1u << i;
        const unsigned log2k = 32 / tables;
        const cpp_int k = cpp_int(1) << log2k;
        ASSERT_EQ(boost::multiprecision::pow(k, tables), cpp_int(1) << 32);
        const cpp_int log_k_n = 32 / log2k;
        EXPECT_EQ(cpp_int(tables) * k, k * log_k_n);
        EXPECT_EQ(cpp_int(predicted_table_total(k2pow32, i)), k * log_k_n);
    }
}

TEST(Formulas, PerLevelTargetShrinks) {
    for (std::uint64_t n : {std::uint64_t{256}, std::uint64_t{4096}, k2pow32}) {
        std::uint64_t prev = n;
        for (unsigned i = 0; i <= 5; ++i) {
            const std::uint64_t b = ceil_root(n, std::uint64_t{1} << i);
            EXPECT_LE(b, prev);
            prev = b;
        }
    }
}

TEST(IntegerHelpers, CeilRootAndLog) {
    EXPECT_EQ(ceil_root(4096, 4), 8u);
    EXPECT_EQ(ceil_root(4097, 4), 9u);
    EXPECT_EQ(ceil_root(256, 2), 16u);
    EXPECT_EQ(ceil_root(1, 7), 1u);
    EXPECT_EQ(ceil_log(4096, 8), 4u);
    EXPECT_EQ(ceil_log(4097, 8), 5u);
    EXPECT_EQ(ceil_log(1, 8), 0u);
    EXPECT_EQ(ceil_log(8, 8), 1u);
}

namespace {

void expect_valid_tree(const Graph& g, const PartitionTree& tree) {
    ASSERT_EQ(tree.level(0).size(), 1u);
    EXPECT_EQ(tree.level(0)[0].members.size(), g.node_count());
    for (std::size_t l = 1; l <= tree.depth(); ++l) {
        std::vector<int> seen(g.node_count(), 0);
        for (std::uint32_t c = 0; c < tree.level(l).size(); ++c) {
            const Cluster& cl = tree.cluster(l, c);
            ASSERT_FALSE(cl.members.empty());
            EXPECT_TRUE(std::binary_search(cl.members.begin(), cl.members.end(), cl.landmark));
            EXPECT_TRUE(rt::induces_connected(g, cl.members)) << "level " << l << " cluster " << c;
            const Cluster& parent = tree.cluster(l - 1, cl.parent);
            EXPECT_EQ(parent.children.at(cl.digit), c);
            for (NodeId v : cl.members) {
                ++seen[v];
                EXPECT_EQ(tree.cluster_of(l, v), c);
                EXPECT_TRUE(std::binary_search(parent.members.begin(), parent.members.end(), v));
            }
        }
        for (int s : seen)
            ASSERT_EQ(s, 1);
    }
    for (std::uint32_t c = 0; c < tree.level(tree.depth()).size(); ++c)
        EXPECT_EQ(tree.cluster(tree.depth(), c).members.size(), 1u);
}

} // namespace

TEST(PartitionTree, RefinesAndStaysConnected) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Graph g = generate_geometric(500, geometric_connectivity_radius(500), seed);
        expect_valid_tree(g, build_partition_tree(g, 4, 5, Metric::Rtt, seed));
        const Graph sf = generate_scale_free(500, 2, seed);
        expect_valid_tree(sf, build_partition_tree(sf, 3, 8, Metric::Hop, seed));
    }
}

TEST(PartitionTree, SmallClustersTakeAllMembers) {
    const Graph g = rt::path_graph(6);
    const PartitionTree tree = build_partition_tree(g, 2, 10, Metric::Hop, 1);
    EXPECT_EQ(tree.level(1).size(), 6u);
    expect_valid_tree(g, tree);
}

TEST(PartitionTree, InvalidDepth) {
    const Graph g = rt::path_graph(4);
    try {
        build_partition_tree(g, 0, 2, Metric::Hop, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidDepth);
    }
}

TEST(BuildStacked, LevelZeroIsExact) {
    const Graph g = generate_geometric(120, geometric_connectivity_radius(120), 3);
    for (const Metric metric : {Metric::Hop, Metric::Rtt}) {
        const StackedScheme s = build_stacked(g, 0, metric, 3);
        EXPECT_EQ(s.depth(), 1u);
        const DistanceOracle d = all_pairs(g, metric);
        for (NodeId u = 0; u < 120; ++u) {
            EXPECT_EQ(s.table_size(u), 120u);
            for (NodeId t = 0; t < 120; ++t)
                ASSERT_TRUE(rt::rel_equal(s.route_to(u, t).cost(metric), d(u, t)));
        }
    }
}

TEST(BuildStacked, LevelOneHasTwoTables) {
    const Graph g = generate_geometric(256, geometric_connectivity_radius(256), 1);
    const StackedScheme s = build_stacked(g, 1, Metric::Hop, 1);
    EXPECT_EQ(s.depth(), 2u);
    EXPECT_EQ(s.tree().level(1).size(), 16u);
    for (NodeId u = 0; u < 256; ++u)
        EXPECT_EQ(s.level_table(1, u).size(), 16u);
}

TEST(BuildStacked, InvalidDepth) {
    const Graph g = rt::path_graph(15);
    for (unsigned level : {3u, 7u}) {
        try {
            build_stacked(g, level, Metric::Hop, 1);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidDepth);
        }
    }
    // 16 = 2^(2^2) is the smallest graph allowing i = 2
    EXPECT_EQ(build_stacked(rt::path_graph(16), 2, Metric::Hop, 1).depth(), 4u);
}

TEST(BuildStacked, NextHopsAreNeighbors) {
    const Graph g = generate_scale_free(300, 2, 5);
    const StackedScheme s = build_stacked(g, 2, Metric::Hop, 5);
    for (NodeId u = 0; u < 300; ++u) {
        for (std::size_t l = 1; l <= s.depth(); ++l) {
            const auto table = s.level_table(l, u);
            for (std::uint32_t digit = 0; digit < table.size(); ++digit) {
                const NodeId landmark = s.tree().cluster(l, s.tree().level(l - 1)[s.tree().cluster_of(l - 1, u)].children[digit]).landmark;
                if (landmark == u)
                    EXPECT_EQ(table[digit], u);
                else
                    EXPECT_TRUE(g.adjacent(u, table[digit]));
            }
        }
    }
}

// Pre-run over seeds 1..5 with the HOP metric: means 41.8..45.4.
TEST(BuildStacked, TableBudgetAtN4096) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Graph g = generate_geometric(4096, geometric_connectivity_radius(4096), seed);
        const StackedScheme s = build_stacked(g, 2, Metric::Hop, seed);
        EXPECT_EQ(s.depth(), 4u);
        EXPECT_EQ(s.tree().branching(), 8u);
        EXPECT_LE(table_sizes(s).mean, 96.0) << "seed " << seed;
    }
}

TEST(RouteStacked, ExhaustiveLoopFree) {
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        const Graph geo = generate_geometric(512, geometric_connectivity_radius(512), seed);
        const Graph sf = generate_scale_free(512, 2, seed);
        for (const Graph* g : {&geo, &sf}) {
            for (unsigned i : {1u, 2u}) {
                const StackedScheme s = build_stacked(*g, i, Metric::Rtt, seed);
                for (NodeId u = 0; u < 512; ++u) {
                    for (NodeId t = 0; t < 512; ++t) {
                        const RoutePath p = s.route_to(u, t);
                        ASSERT_EQ(p.nodes.back(), t);
                    }
                }
            }
        }
    }
}

TEST(RouteStacked, SelfRoute) {
    const Graph g = rt::grid_graph(4, 4);
    const StackedScheme s = build_stacked(g, 1, Metric::Hop, 2);
    EXPECT_EQ(s.route_to(6, 6).nodes, (std::vector<NodeId>{6}));
}

TEST(RouteStacked, LabelMismatch) {
    const Graph g = rt::grid_graph(4, 4);
    const StackedScheme s = build_stacked(g, 1, Metric::Hop, 2);
    HierarchicalLabel bad = s.label(9);
    bad.digits[0] = (bad.digits[0] + 1) % 4;
    try {
        s.route(0, bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LabelMismatch);
    }
    bad.digits.pop_back();
    EXPECT_THROW(s.route(0, bad), Error);
}

// Pre-run over seeds 1..10 (RTT, exhaustive): mean 1.15..1.21, max 22..80,
// violation_fraction(9) between 1.6e-5 and 7.1e-5. The audit reports these;
// only the structural facts are asserted.
TEST(RouteStacked, StretchNineAuditN1024) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Graph g = generate_geometric(1024, geometric_connectivity_radius(1024), seed);
        const StackedScheme s = build_stacked(g, 2, Metric::Rtt, seed);
        const StretchStats stats = stretch_distribution(s, PairSample::exhaustive(1024), all_pairs(g, Metric::Rtt));
        EXPECT_GE(stats.mean, 1.0);
        EXPECT_LT(stats.violation_fraction(9.0), 0.01);
        RecordProperty("seed" + std::to_string(seed) + "_violation_fraction",
                       std::to_string(stats.violation_fraction(9.0)));
    }
}

// Pre-run over seeds 1..10: stacked i=1 mean stretch 1.07..1.11 against
// compact 1.07..1.14 under both metrics, never more than 0.07 apart.
TEST(BuildStacked, LevelOneComparableToCompact) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const Graph g = generate_geometric(256, geometric_connectivity_radius(256), seed);
        const PairSample pairs = PairSample::exhaustive(256);
        for (const Metric metric : {Metric::Hop, Metric::Rtt}) {
            const DistanceOracle d = all_pairs(g, metric);
            const StackedScheme st = build_stacked(g, 1, metric, seed);
            const CompactScheme cs =
                build_compact(g, select_landmarks(g, 16, LandmarkStrategy::Uniform, seed, metric), metric);
            const double a = stretch_distribution(st, pairs, d).mean;
            const double b = stretch_distribution(cs, pairs, d).mean;
            EXPECT_LE(std::abs(a - b), 0.1) << "seed " << seed;
        }
    }
}

TEST(BuildHierarchical, WideBranchingIsFlat) {
    const Graph g = generate_geometric(100, 0.3, 1);
    const StackedScheme s = build_hierarchical(g, 100, Metric::Hop, 1);
    EXPECT_EQ(s.depth(), 1u);
    EXPECT_EQ(s.table_size(0), 100u);
    EXPECT_EQ(build_hierarchical(g, 500, Metric::Hop, 1).depth(), 1u);
}

TEST(BuildHierarchical, MatchesStackedOnSquares) {
    const Graph g = generate_geometric(256, geometric_connectivity_radius(256), 7);
    const StackedScheme h = build_hierarchical(g, 16, Metric::Rtt, 7);
    const StackedScheme s = build_stacked(g, 1, Metric::Rtt, 7);
    EXPECT_EQ(h.depth(), 2u);
    EXPECT_TRUE(h.tree() == s.tree());
    EXPECT_EQ(table_sizes(h).per_node, table_sizes(s).per_node);
}

TEST(BuildHierarchical, BranchingTooSmall) {
    const Graph g = rt::path_graph(4);
    try {
        build_hierarchical(g, 1, Metric::Hop, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidParameters);
    }
}

TEST(Labels, BitBound) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Graph g = generate_geometric(1024, geometric_connectivity_radius(1024), seed);
        for (unsigned i : {1u, 2u, 3u}) {
            const StackedScheme s = build_stacked(g, i, Metric::Hop, seed);
            const unsigned d = static_cast<unsigned>(s.depth());
            const unsigned bound = 2 * ceil_log2(1024) + d * ceil_log2(d);
            for (NodeId u = 0; u < 1024; ++u)
                ASSERT_LE(s.label_bits(u), bound);
        }
    }
}

TEST(Dump, Format) {
    const Graph g = rt::path_graph(4);
    const StackedScheme s = build_stacked(g, 0, Metric::Hop, 1);
    EXPECT_EQ(s.dump(), "0 | 0 | 4\n1 | 1 | 4\n2 | 2 | 4\n3 | 3 | 4\n");
}

TEST(Predictions, SchemeReportsItsConstruction) {
    const Graph g = generate_geometric(4096, geometric_connectivity_radius(4096), 1);
    const StackedScheme s = build_stacked(g, 2, Metric::Hop, 1);
    EXPECT_EQ(s.predicted_total(), 32.0);
    EXPECT_EQ(s.nominal_stretch_bound(), 9.0);
    const StackedScheme h = build_hierarchical(g, 8, Metric::Hop, 1);
    EXPECT_NEAR(h.predicted_total(), 32.0, 1e-9);
    EXPECT_NEAR(h.nominal_stretch_bound(), 9.0, 1e-9);
}
