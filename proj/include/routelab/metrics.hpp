#pragma once

#include <routelab/compact.hpp>
#include <routelab/error.hpp>
#include <routelab/graph.hpp>
#include <routelab/parallel.hpp>
#include <routelab/random.hpp>
#include <routelab/route_path.hpp>
#include <routelab/shortest_path.hpp>
#include <routelab/stacked.hpp>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace routelab {

/// Anything that can forward a packet from s to t.
template <class R>
concept Router = requires(const R& r, NodeId s, NodeId t) {
    { r.route_to(s, t) } -> std::same_as<RoutePath>;
};

inline constexpr double kStretchTolerance = 1e-9;
inline constexpr std::size_t kDefaultSampledPairs = 10'000;

enum class SampleMode { Exhaustive, Sampled };

/// Ordered (source, dest) pairs with source != dest, sorted lexicographically.
/// Exhaustive samples are not materialized until asked for.
class PairSample {
public:
    static PairSample exhaustive(std::size_t node_count) {
        PairSample out;
        out.mode_ = SampleMode::Exhaustive;
        out.node_count_ = node_count;
        return out;
    }

    /// `count` distinct pairs drawn without replacement. Asking for at least
    /// every pair yields the exhaustive pair list.
    static PairSample sampled(std::size_t node_count, std::size_t count, std::uint64_t seed) {
        PairSample out;
        out.mode_ = SampleMode::Sampled;
        out.node_count_ = node_count;
        out.seed_ = seed;
        const std::uint64_t total = total_pairs(node_count);
        if (count >= total) {
            out.pairs_ = exhaustive(node_count).pairs();
            return out;
        }
        // Floyd's algorithm over the pair index space
        Rng rng(derive_seed(seed, 0x9a125));
        std::unordered_set<std::uint64_t> picked;
        picked.reserve(count * 2);
        for (std::uint64_t j = total - count; j < total; ++j) {
            const std::uint64_t r = rng.index(j + 1);
            if (!picked.insert(r).second)
                picked.insert(j);
        }
        std::vector<std::uint64_t> indices(picked.begin(), picked.end());
        std::sort(indices.begin(), indices.end());
        out.pairs_.reserve(indices.size());
        for (std::uint64_t idx : indices)
            out.pairs_.push_back(pair_at(node_count, idx));
        return out;
    }

    SampleMode mode() const noexcept { return mode_; }
    std::size_t node_count() const noexcept { return node_count_; }
    std::uint64_t seed() const noexcept { return seed_; }

    std::size_t size() const noexcept {
        return mode_ == SampleMode::Exhaustive ? total_pairs(node_count_) : pairs_.size();
    }

    std::vector<std::pair<NodeId, NodeId>> pairs() const {
        if (mode_ == SampleMode::Sampled)
            return pairs_;
        std::vector<std::pair<NodeId, NodeId>> all;
        all.reserve(size());
        for (NodeId s = 0; s < node_count_; ++s)
            for (NodeId t = 0; t < node_count_; ++t)
                if (s != t)
                    all.emplace_back(s, t);
        return all;
    }

private:
    static std::uint64_t total_pairs(std::size_t n) noexcept { return n < 2 ? 0 : std::uint64_t{n} * (n - 1); }

    static std::pair<NodeId, NodeId> pair_at(std::size_t n, std::uint64_t idx) noexcept {
        const auto s = static_cast<NodeId>(idx / (n - 1));
        auto t = static_cast<NodeId>(idx % (n - 1));
        if (t >= s)
            ++t;
        return {s, t};
    }

    SampleMode mode_ = SampleMode::Exhaustive;
    std::size_t node_count_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::pair<NodeId, NodeId>> pairs_;
};

/// Distribution summary of per-pair stretch values under one metric.
struct StretchStats {
    Metric metric = Metric::Hop;
    std::size_t sample_count = 0;
    double mean = 0.0;
    double max = 0.0;
    double p50 = 0.0;
    double p99 = 0.0;
    std::vector<double> sorted; // every measured value, ascending

    /// Values are sorted before aggregation, so the result does not depend
    /// on evaluation order.
    static StretchStats from_values(Metric metric, std::vector<double> values) {
        StretchStats out;
        out.metric = metric;
        std::sort(values.begin(), values.end());
        out.sample_count = values.size();
        if (!values.empty()) {
            double sum = 0.0;
            for (double v : values)
                sum += v;
            out.mean = sum / static_cast<double>(values.size());
            out.max = values.back();
            out.p50 = percentile(values, 0.50);
            out.p99 = percentile(values, 0.99);
        }
        out.sorted = std::move(values);
        return out;
    }

    /// Fraction of pairs whose stretch exceeds `bound` (beyond 1e-9 relative).
    double violation_fraction(double bound) const {
        if (sorted.empty())
            return 0.0;
        const double cut = bound * (1.0 + kStretchTolerance);
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), cut);
        return static_cast<double>(above) / static_cast<double>(sorted.size());
    }

private:
    // nearest-rank percentile
    static double percentile(const std::vector<double>& sorted_values, double q) {
        const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted_values.size())));
        return sorted_values[std::clamp<std::size_t>(rank, 1, sorted_values.size()) - 1];
    }
};

struct RouteCost {
    std::size_t hop = 0;
    double rtt = 0.0;

    double under(Metric metric) const noexcept { return metric == Metric::Hop ? static_cast<double>(hop) : rtt; }
};

/// Routes every pair once; slot i holds the cost of pairs[i].
template <Router R>
std::vector<RouteCost> evaluate_routes(const R& router, const std::vector<std::pair<NodeId, NodeId>>& pairs,
                                       unsigned threads = 1) {
    std::vector<RouteCost> costs(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
        const RoutePath path = router.route_to(pairs[i].first, pairs[i].second);
        costs[i] = {path.cost_hop, path.cost_rtt};
    });
    return costs;
}

namespace detail {

inline std::vector<double> stretch_values(const std::vector<std::pair<NodeId, NodeId>>& pairs,
                                          const std::vector<RouteCost>& costs, const DistanceOracle& oracle) {
    std::vector<double> values(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [s, t] = pairs[i];
        if (!oracle.has(s, t))
            throw Error(ErrorCode::OracleUnavailable, "oracle has no distance for pair " + std::to_string(s) + "," +
                                                          std::to_string(t));
        values[i] = costs[i].under(oracle.metric()) / oracle(s, t);
    }
    return values;
}

} // namespace detail

/// Stretch of `router` over the sample, scored against `oracle` under its metric.
template <Router R>
StretchStats stretch_distribution(const R& router, const PairSample& sample, const DistanceOracle& oracle,
                                  unsigned threads = 1) {
    const auto pairs = sample.pairs();
    const auto costs = evaluate_routes(router, pairs, threads);
    return StretchStats::from_values(oracle.metric(), detail::stretch_values(pairs, costs, oracle));
}

struct JointStretch {
    NodeId source;
    NodeId dest;
    double hop;
    double rtt;
};

struct DualStretch {
    StretchStats hop;
    StretchStats rtt;
    std::vector<JointStretch> records; // in sample order
};

/// Scores the same routes under both metrics.
template <Router R>
DualStretch dual_stretch(const R& router, const PairSample& sample, const DistanceOracle& hop_oracle,
                         const DistanceOracle& rtt_oracle, unsigned threads = 1) {
    if (hop_oracle.metric() != Metric::Hop || rtt_oracle.metric() != Metric::Rtt)
        throw Error(ErrorCode::InvalidParameters, "dual_stretch needs a HOP and an RTT oracle");
    const auto pairs = sample.pairs();
    const auto costs = evaluate_routes(router, pairs, threads);
    auto hop = detail::stretch_values(pairs, costs, hop_oracle);
    auto rtt = detail::stretch_values(pairs, costs, rtt_oracle);
    DualStretch out;
    out.records.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        out.records.push_back({pairs[i].first, pairs[i].second, hop[i], rtt[i]});
    out.hop = StretchStats::from_values(Metric::Hop, std::move(hop));
    out.rtt = StretchStats::from_values(Metric::Rtt, std::move(rtt));
    return out;
}

struct HistogramBin {
    double lower;
    double upper;
    std::size_t count;
};

/// Pairwise distance distribution. HOP distances get one bin per hop count;
/// RTT distances get quarter-decade logarithmic bins.
struct RemotenessProfile {
    Metric metric = Metric::Hop;
    std::size_t pair_count = 0;
    double diameter = 0.0;
    double min_distance = 0.0;
    double mean = 0.0;
    std::vector<HistogramBin> histogram;

    /// log10(diameter / min_distance): how many orders of magnitude the distances span.
    double spread_decades() const {
        return min_distance > 0.0 ? std::log10(diameter / min_distance) : 0.0;
    }
};

inline RemotenessProfile remoteness_profile(const Graph& graph, Metric metric, const PairSample& sample,
                                            unsigned threads = 1) {
    const std::size_t n = graph.node_count();
    // group pair targets by source
    std::vector<NodeId> sources;
    std::vector<std::vector<NodeId>> targets;
    const bool all = sample.mode() == SampleMode::Exhaustive;
    if (all) {
        sources.resize(n);
        for (NodeId s = 0; s < n; ++s)
            sources[s] = s;
    } else {
        for (const auto& [s, t] : sample.pairs()) {
            if (sources.empty() || sources.back() != s) {
                sources.push_back(s);
                targets.emplace_back();
            }
            targets.back().push_back(t);
        }
    }

    auto bin_of = [metric](double d) -> int {
        return metric == Metric::Hop ? static_cast<int>(std::lround(d))
                                     : static_cast<int>(std::floor(4.0 * std::log10(d)));
    };

    struct Partial {
        double sum = 0.0;
        double max = 0.0;
        double min = kInfinity;
        std::size_t count = 0;
        std::map<int, std::size_t> bins;
    };
    std::vector<Partial> partials(sources.size());
    parallel_for(sources.size(), threads, [&](std::size_t i) {
        const DistanceMap row = sssp(graph, sources[i], metric);
        Partial& p = partials[i];
        auto take = [&](NodeId t) {
            const double d = row.distance[t];
            p.sum += d;
            p.max = std::max(p.max, d);
            p.min = std::min(p.min, d);
            ++p.count;
            ++p.bins[bin_of(d)];
        };
        if (all) {
            for (NodeId t = 0; t < n; ++t)
                if (t != sources[i])
                    take(t);
        } else {
            for (NodeId t : targets[i])
                take(t);
        }
    });

    RemotenessProfile out;
    out.metric = metric;
    double sum = 0.0;
    double min = kInfinity;
    std::map<int, std::size_t> bins;
    for (const Partial& p : partials) {
        sum += p.sum;
        out.pair_count += p.count;
        out.diameter = std::max(out.diameter, p.max);
        min = std::min(min, p.min);
        for (const auto& [b, c] : p.bins)
            bins[b] += c;
    }
    if (out.pair_count > 0) {
        out.mean = sum / static_cast<double>(out.pair_count);
        out.min_distance = min;
    }
    for (const auto& [b, c] : bins) {
        if (metric == Metric::Hop)
            out.histogram.push_back({static_cast<double>(b), static_cast<double>(b + 1), c});
        else
            out.histogram.push_back({std::pow(10.0, b / 4.0), std::pow(10.0, (b + 1) / 4.0), c});
    }
    return out;
}

/// A built scheme to summarize, under a display name.
struct NamedScheme {
    std::string name;
    std::variant<const CompactScheme*, const StackedScheme*> scheme;
};

struct TableSizeRow {
    std::string scheme;
    std::size_t node_count;
    double mean;
    std::size_t max;
    double predicted;
};

/// Measured versus predicted per-node state. A compact scheme is predicted at
/// one compactization level (2 sqrt N); stacked and hierarchical schemes use
/// their construction's own prediction.
inline std::vector<TableSizeRow> table_size_report(const std::vector<NamedScheme>& schemes) {
    std::vector<TableSizeRow> rows;
    rows.reserve(schemes.size());
    for (const NamedScheme& entry : schemes) {
        std::visit(
            [&](const auto* scheme) {
                const TableSizeSummary sizes = table_sizes(*scheme);
                double predicted = 0.0;
                if constexpr (std::is_same_v<std::decay_t<decltype(*scheme)>, CompactScheme>)
                    predicted = static_cast<double>(predicted_table_total(scheme->node_count(), 1));
                else
                    predicted = scheme->predicted_total();
                rows.push_back({entry.name, scheme->node_count(), sizes.mean, sizes.max, predicted});
            },
            entry.scheme);
    }
    return rows;
}

} // namespace routelab
