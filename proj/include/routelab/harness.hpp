#pragma once

#include <routelab/compact.hpp>
#include <routelab/csv.hpp>
#include <routelab/error.hpp>
#include <routelab/graph.hpp>
#include <routelab/metrics.hpp>
#include <routelab/shortest_path.hpp>
#include <routelab/stacked.hpp>
#include <routelab/topology.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace routelab {

inline constexpr int kConfigVersion = 1;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct GeometricSpec {
    std::size_t n;
    std::optional<double> radius; // default: geometric_connectivity_radius(n)
};
struct ScaleFreeSpec {
    std::size_t n;
    std::size_t attach_m = 2;
};
struct TwoLevelSpec {
    std::size_t domains;
    std::size_t nodes_per_domain;
    std::size_t inter_edges;
};
struct OceanSpec {
    std::size_t cluster_size;
    double bridge_weight;
};
struct FileSpec {
    std::string path;
};
using TopologySpec = std::variant<GeometricSpec, ScaleFreeSpec, TwoLevelSpec, OceanSpec, FileSpec>;

struct ExactSpec {};
struct CompactSpec {
    std::optional<std::size_t> landmarks; // default ceil(sqrt(N))
    LandmarkStrategy strategy = LandmarkStrategy::Uniform;
};
struct StackedSpec {
    unsigned i;
};
struct HierarchicalSpec {
    std::size_t k;
};

struct SchemeSpec {
    std::variant<ExactSpec, CompactSpec, StackedSpec, HierarchicalSpec> kind;
    /// When set, build once under this metric and score under every listed
    /// metric; otherwise build and score under each metric separately.
    std::optional<Metric> build_metric;
    std::optional<double> bound;
};

struct PairSpec {
    SampleMode mode = SampleMode::Exhaustive;
    std::size_t count = kDefaultSampledPairs;
};

/// Largest graph whose pairs are evaluated exhaustively when the config
/// leaves "pairs" out.
inline constexpr std::size_t kDefaultExhaustiveLimit = 1024;

struct ExperimentConfig {
    TopologySpec topology;
    std::vector<SchemeSpec> schemes;
    std::vector<Metric> metrics;
    std::optional<PairSpec> pairs; // default depends on N
    std::vector<std::uint64_t> seeds;
    std::string output = "results.csv";
    unsigned threads = 1;
    bool dump_tables = false;
    std::string digest;
};

namespace detail {

using nlohmann::json;

inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4)
        out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    return out;
}

[[noreturn]] inline void invalid(const std::string& field, const std::string& what) {
    throw ConfigError(ErrorCode::ConfigInvalid, field, what);
}

inline void allow_only(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            invalid(path.empty() ? key : path + "." + key, "unknown field");
    }
}

inline const json& require(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key))
        invalid(path + "." + key, "missing required field");
    return obj.at(key);
}

inline std::int64_t get_int(const json& value, const std::string& field) {
    if (!value.is_number_integer())
        invalid(field, "expected an integer");
    return value.get<std::int64_t>();
}

inline std::size_t get_count(const json& value, const std::string& field, std::int64_t min = 1) {
    const std::int64_t v = get_int(value, field);
    if (v < min)
        invalid(field, "must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

inline double get_real(const json& value, const std::string& field) {
    if (!value.is_number())
        invalid(field, "expected a number");
    return value.get<double>();
}

inline std::string get_string(const json& value, const std::string& field) {
    if (!value.is_string())
        invalid(field, "expected a string");
    return value.get<std::string>();
}

inline Metric get_metric(const json& value, const std::string& field) {
    const std::string text = get_string(value, field);
    if (text != "hop" && text != "rtt")
        invalid(field, "metric must be \"hop\" or \"rtt\"");
    return parse_metric(text);
}

inline TopologySpec parse_topology(const json& t) {
    const std::string path = "topology";
    if (!t.is_object())
        invalid(path, "expected an object");
    const std::string generator = get_string(require(t, path, "generator"), path + ".generator");
    if (generator == "geometric") {
        allow_only(t, path, {"generator", "n", "radius"});
        GeometricSpec spec{get_count(require(t, path, "n"), path + ".n", 2), std::nullopt};
        if (t.contains("radius")) {
            spec.radius = get_real(t.at("radius"), path + ".radius");
            if (!(*spec.radius > 0.0))
                invalid(path + ".radius", "must be positive");
        }
        return spec;
    }
    if (generator == "scale_free") {
        allow_only(t, path, {"generator", "n", "attach_m"});
        ScaleFreeSpec spec{get_count(require(t, path, "n"), path + ".n")};
        if (t.contains("attach_m"))
            spec.attach_m = get_count(t.at("attach_m"), path + ".attach_m");
        if (spec.n < spec.attach_m + 1)
            invalid(path + ".n", "must be >= attach_m + 1");
        return spec;
    }
    if (generator == "two_level") {
        allow_only(t, path, {"generator", "domains", "nodes_per_domain", "inter_edges"});
        TwoLevelSpec spec{get_count(require(t, path, "domains"), path + ".domains"),
                          get_count(require(t, path, "nodes_per_domain"), path + ".nodes_per_domain"),
                          get_count(require(t, path, "inter_edges"), path + ".inter_edges", 0)};
        if (spec.inter_edges + 1 < spec.domains)
            invalid(path + ".inter_edges", "must be >= domains - 1");
        return spec;
    }
    if (generator == "ocean") {
        allow_only(t, path, {"generator", "cluster_size", "bridge_weight"});
        OceanSpec spec{get_count(require(t, path, "cluster_size"), path + ".cluster_size", 3),
                       get_real(require(t, path, "bridge_weight"), path + ".bridge_weight")};
        if (!(spec.bridge_weight >= 10.0))
            invalid(path + ".bridge_weight", "must be >= 10");
        return spec;
    }
    if (generator == "file") {
        allow_only(t, path, {"generator", "path"});
        return FileSpec{get_string(require(t, path, "path"), path + ".path")};
    }
    invalid(path + ".generator", "unknown generator '" + generator + "'");
}

inline std::optional<std::size_t> known_node_count(const TopologySpec& topology) {
    return std::visit(
        [](const auto& spec) -> std::optional<std::size_t> {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, GeometricSpec> || std::is_same_v<T, ScaleFreeSpec>)
                return spec.n;
            else if constexpr (std::is_same_v<T, TwoLevelSpec>)
                return spec.domains * spec.nodes_per_domain;
            else if constexpr (std::is_same_v<T, OceanSpec>)
                return 2 * spec.cluster_size;
            else
                return std::nullopt;
        },
        topology);
}

/// Precondition checks that need N; shared by validation and run time.
inline void check_scheme_against(const SchemeSpec& scheme, std::size_t n, const std::string& path) {
    if (const auto* c = std::get_if<CompactSpec>(&scheme.kind)) {
        if (c->landmarks && (*c->landmarks < 1 || *c->landmarks > n))
            invalid(path + ".landmarks", "landmark count must lie in [1, N] for N=" + std::to_string(n));
    } else if (const auto* s = std::get_if<StackedSpec>(&scheme.kind)) {
        const bool ok = s->i <= 6 && (std::size_t{1} << s->i) < 64 && n >= (std::uint64_t{1} << (std::size_t{1} << s->i));
        if (!ok)
            invalid(path + ".i", "precondition N^(1/2^i) >= 2 violated for N=" + std::to_string(n));
    }
}

inline SchemeSpec parse_scheme(const json& s, const std::string& path) {
    if (!s.is_object())
        invalid(path, "expected an object");
    const std::string type = get_string(require(s, path, "type"), path + ".type");
    SchemeSpec spec;
    if (type == "exact") {
        allow_only(s, path, {"type", "build_metric", "bound"});
        spec.kind = ExactSpec{};
    } else if (type == "compact") {
        allow_only(s, path, {"type", "landmarks", "strategy", "build_metric", "bound"});
        CompactSpec c;
        if (s.contains("landmarks"))
            c.landmarks = get_count(s.at("landmarks"), path + ".landmarks");
        if (s.contains("strategy")) {
            const std::string strategy = get_string(s.at("strategy"), path + ".strategy");
            if (strategy == "uniform")
                c.strategy = LandmarkStrategy::Uniform;
            else if (strategy == "high_degree")
                c.strategy = LandmarkStrategy::HighDegree;
            else
                invalid(path + ".strategy", "strategy must be \"uniform\" or \"high_degree\"");
        }
        spec.kind = c;
    } else if (type == "stacked") {
        allow_only(s, path, {"type", "i", "build_metric", "bound"});
        spec.kind = StackedSpec{static_cast<unsigned>(get_count(require(s, path, "i"), path + ".i", 0))};
    } else if (type == "hierarchical") {
        allow_only(s, path, {"type", "k", "build_metric", "bound"});
        spec.kind = HierarchicalSpec{get_count(require(s, path, "k"), path + ".k", 2)};
    } else {
        invalid(path + ".type", "unknown scheme type '" + type + "'");
    }
    if (s.contains("build_metric"))
        spec.build_metric = get_metric(s.at("build_metric"), path + ".build_metric");
    if (s.contains("bound")) {
        spec.bound = get_real(s.at("bound"), path + ".bound");
        if (!(*spec.bound >= 1.0))
            invalid(path + ".bound", "must be >= 1");
    }
    return spec;
}

} // namespace detail

/// Parses and cross-checks a JSON experiment config. Throws ConfigError with
/// code ParseError for malformed JSON and ConfigInvalid (naming the field)
/// for anything else.
inline ExperimentConfig validate_config(std::string_view text) {
    using detail::invalid;
    detail::json root;
    try {
        root = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw ConfigError(ErrorCode::ParseError, "", e.what());
    }
    if (!root.is_object())
        invalid("", "config must be a JSON object");
    detail::allow_only(root, "", {"config_version", "topology", "schemes", "metrics", "pairs", "seeds", "output",
                                  "threads", "dump_tables"});
    if (!root.contains("config_version"))
        invalid("config_version", "missing required field");
    if (detail::get_int(root.at("config_version"), "config_version") != kConfigVersion)
        invalid("config_version", "unsupported version (expected " + std::to_string(kConfigVersion) + ")");

    ExperimentConfig config;
    if (!root.contains("topology"))
        invalid("topology", "missing required field");
    config.topology = detail::parse_topology(root.at("topology"));

    if (!root.contains("schemes") || !root.at("schemes").is_array() || root.at("schemes").empty())
        invalid("schemes", "need a nonempty list of schemes");
    for (std::size_t i = 0; i < root.at("schemes").size(); ++i)
        config.schemes.push_back(detail::parse_scheme(root.at("schemes")[i], "schemes[" + std::to_string(i) + "]"));

    if (root.contains("metrics")) {
        const auto& metrics = root.at("metrics");
        if (!metrics.is_array() || metrics.empty())
            invalid("metrics", "need a nonempty list of metrics");
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            const Metric m = detail::get_metric(metrics[i], "metrics[" + std::to_string(i) + "]");
            if (std::find(config.metrics.begin(), config.metrics.end(), m) != config.metrics.end())
                invalid("metrics[" + std::to_string(i) + "]", "duplicate metric");
            config.metrics.push_back(m);
        }
    } else {
        config.metrics = {Metric::Hop};
    }

    if (root.contains("pairs")) {
        const auto& p = root.at("pairs");
        if (!p.is_object())
            invalid("pairs", "expected an object");
        detail::allow_only(p, "pairs", {"mode", "count"});
        PairSpec spec;
        const std::string mode = detail::get_string(detail::require(p, "pairs", "mode"), "pairs.mode");
        if (mode == "exhaustive") {
            spec.mode = SampleMode::Exhaustive;
        } else if (mode == "sampled") {
            spec.mode = SampleMode::Sampled;
            if (p.contains("count"))
                spec.count = detail::get_count(p.at("count"), "pairs.count");
        } else {
            invalid("pairs.mode", "mode must be \"exhaustive\" or \"sampled\"");
        }
        config.pairs = spec;
    }

    if (!root.contains("seeds") || !root.at("seeds").is_array() || root.at("seeds").empty())
        invalid("seeds", "need a nonempty list of seeds");
    for (std::size_t i = 0; i < root.at("seeds").size(); ++i)
        config.seeds.push_back(detail::get_count(root.at("seeds")[i], "seeds[" + std::to_string(i) + "]", 0));

    if (root.contains("output"))
        config.output = detail::get_string(root.at("output"), "output");
    if (root.contains("threads"))
        config.threads = static_cast<unsigned>(detail::get_count(root.at("threads"), "threads"));
    if (root.contains("dump_tables")) {
        if (!root.at("dump_tables").is_boolean())
            invalid("dump_tables", "expected a boolean");
        config.dump_tables = root.at("dump_tables").get<bool>();
    }

    if (const auto n = detail::known_node_count(config.topology)) {
        for (std::size_t i = 0; i < config.schemes.size(); ++i)
            detail::check_scheme_against(config.schemes[i], *n, "schemes[" + std::to_string(i) + "]");
    }

    // Object keys are kept sorted, so the dump ignores field order. Run-time
    // knobs are left out so they cannot change the digest.
    detail::json canonical = root;
    canonical.erase("threads");
    config.digest = detail::hex64(detail::fnv1a(canonical.dump()));
    return config;
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct PhaseTiming {
    std::string phase;
    double seconds;
};

struct RunRecord {
    std::string digest;
    std::vector<std::uint64_t> seeds;
    std::vector<PhaseTiming> timings;
    std::vector<std::string> csv_rows; // without header, canonical order
    std::filesystem::path output;
};

namespace detail {

inline std::string describe(const TopologySpec& topology, std::size_t n) {
    return std::visit(
        [n](const auto& spec) -> std::string {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, GeometricSpec>)
                return "geometric:n=" + std::to_string(spec.n) + ":r=" +
                       csv::number(spec.radius.value_or(geometric_connectivity_radius(spec.n)));
            else if constexpr (std::is_same_v<T, ScaleFreeSpec>)
                return "scale_free:n=" + std::to_string(spec.n) + ":m=" + std::to_string(spec.attach_m);
            else if constexpr (std::is_same_v<T, TwoLevelSpec>)
                return "two_level:d=" + std::to_string(spec.domains) + ":k=" + std::to_string(spec.nodes_per_domain) +
                       ":x=" + std::to_string(spec.inter_edges);
            else if constexpr (std::is_same_v<T, OceanSpec>)
                return "ocean:c=" + std::to_string(spec.cluster_size) + ":w=" + csv::number(spec.bridge_weight);
            else
                return "file:" + spec.path + ":n=" + std::to_string(n);
        },
        topology);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::InvalidParameters, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Graph make_graph(const TopologySpec& topology, std::uint64_t seed) {
    return std::visit(
        [seed](const auto& spec) -> Graph {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, GeometricSpec>)
                return generate_geometric(spec.n, spec.radius.value_or(geometric_connectivity_radius(spec.n)), seed);
            else if constexpr (std::is_same_v<T, ScaleFreeSpec>)
                return generate_scale_free(spec.n, spec.attach_m, seed);
            else if constexpr (std::is_same_v<T, TwoLevelSpec>)
                return generate_two_level(spec.domains, spec.nodes_per_domain, spec.inter_edges, seed).graph;
            else if constexpr (std::is_same_v<T, OceanSpec>)
                return generate_ocean(spec.cluster_size, spec.bridge_weight, seed).graph;
            else
                return load_edge_list(read_file(spec.path));
        },
        topology);
}

inline std::string scheme_name(const SchemeSpec& spec, std::size_t n) {
    std::string name = std::visit(
        [n](const auto& kind) -> std::string {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, ExactSpec>)
                return "exact";
            else if constexpr (std::is_same_v<T, CompactSpec>)
                return "compact:L=" + std::to_string(kind.landmarks.value_or(default_landmark_count(n))) + ":" +
                       (kind.strategy == LandmarkStrategy::Uniform ? "uniform" : "high_degree");
            else if constexpr (std::is_same_v<T, StackedSpec>)
                return "stacked:i=" + std::to_string(kind.i);
            else
                return "hierarchical:k=" + std::to_string(kind.k);
        },
        spec.kind);
    if (spec.build_metric)
        name += ":built=" + std::string(to_string(*spec.build_metric));
    return name;
}

using BuiltScheme = std::variant<CompactScheme, StackedScheme>;

inline BuiltScheme build_scheme(const SchemeSpec& spec, const Graph& graph, Metric metric, std::uint64_t seed) {
    const std::uint64_t scheme_seed = derive_seed(seed, 0x5c4e3e);
    return std::visit(
        [&](const auto& kind) -> BuiltScheme {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, ExactSpec>) {
                return build_stacked(graph, 0, metric, scheme_seed);
            } else if constexpr (std::is_same_v<T, CompactSpec>) {
                const std::size_t count = kind.landmarks.value_or(default_landmark_count(graph.node_count()));
                return build_compact(graph, select_landmarks(graph, count, kind.strategy, scheme_seed, metric), metric);
            } else if constexpr (std::is_same_v<T, StackedSpec>) {
                return build_stacked(graph, kind.i, metric, scheme_seed);
            } else {
                return build_hierarchical(graph, kind.k, metric, scheme_seed);
            }
        },
        spec.kind);
}

inline double default_bound(const BuiltScheme& scheme) {
    if (std::holds_alternative<CompactScheme>(scheme))
        return 3.0;
    return std::get<StackedScheme>(scheme).nominal_stretch_bound();
}

inline std::string dump(const BuiltScheme& scheme) {
    return std::visit([](const auto& s) { return s.dump(); }, scheme);
}

inline PairSample make_sample(const std::optional<PairSpec>& spec, std::size_t n, std::uint64_t seed) {
    const std::uint64_t sample_seed = derive_seed(seed, 0x9a1e);
    if (spec) {
        if (spec->mode == SampleMode::Exhaustive)
            return PairSample::exhaustive(n);
        return PairSample::sampled(n, spec->count, sample_seed);
    }
    if (n <= kDefaultExhaustiveLimit)
        return PairSample::exhaustive(n);
    return PairSample::sampled(n, kDefaultSampledPairs, sample_seed);
}

inline DistanceOracle make_oracle(const Graph& graph, Metric metric, const PairSample& sample, unsigned threads) {
    if (sample.mode() == SampleMode::Exhaustive)
        return DistanceOracle::all_pairs(graph, metric, threads);
    const auto pairs = sample.pairs();
    return DistanceOracle::for_pairs(graph, metric, pairs, threads);
}

} // namespace detail

struct RunOptions {
    std::optional<std::uint64_t> seed{};        // replaces the config's seed list
    std::optional<std::filesystem::path> out_dir{};
    std::optional<unsigned> threads{};
    bool write_files = true;
};

/// For each seed: build the graph, build every scheme, score it under every
/// metric and collect one CSV row per (scheme, metric). Rows come out ordered
/// by seed, then scheme, then metric, whatever the thread count.
inline RunRecord run_experiment(const ExperimentConfig& config, const RunOptions& options = {}) {
    using Clock = std::chrono::steady_clock;
    const unsigned threads = options.threads.value_or(config.threads);
    RunRecord record;
    record.digest = config.digest;
    record.seeds = options.seed ? std::vector<std::uint64_t>{*options.seed} : config.seeds;
    record.output = options.out_dir ? *options.out_dir / std::filesystem::path(config.output).filename()
                                    : std::filesystem::path(config.output);

    auto timed = [&](const std::string& phase, auto&& fn) {
        const auto start = Clock::now();
        auto result = fn();
        record.timings.push_back({phase, std::chrono::duration<double>(Clock::now() - start).count()});
        return result;
    };

    if (options.write_files && record.output.has_parent_path())
        std::filesystem::create_directories(record.output.parent_path());

    for (const std::uint64_t seed : record.seeds) {
        const std::string seed_tag = "seed " + std::to_string(seed);
        Graph graph;
        try {
            graph = timed(seed_tag + ": topology", [&] { return detail::make_graph(config.topology, seed); });
            for (std::size_t i = 0; i < config.schemes.size(); ++i)
                detail::check_scheme_against(config.schemes[i], graph.node_count(),
                                             "schemes[" + std::to_string(i) + "]");
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw Error(e.code(), seed_tag + ", topology: " + e.what());
        }
        const std::size_t n = graph.node_count();
        const std::string graph_name = detail::describe(config.topology, n);
        const PairSample sample = detail::make_sample(config.pairs, n, seed);

        std::vector<std::optional<DistanceOracle>> oracles(2);
        auto oracle_for = [&](Metric m) -> const DistanceOracle& {
            auto& slot = oracles[m == Metric::Hop ? 0 : 1];
            if (!slot)
                slot = timed(seed_tag + ": oracle " + std::string(to_string(m)),
                             [&] { return detail::make_oracle(graph, m, sample, threads); });
            return *slot;
        };

        for (std::size_t si = 0; si < config.schemes.size(); ++si) {
            const SchemeSpec& spec = config.schemes[si];
            const std::string name = detail::scheme_name(spec, n);
            const std::string context = seed_tag + ", scheme " + name;
            try {
                std::optional<detail::BuiltScheme> shared;
                if (spec.build_metric)
                    shared = timed(context + ": build",
                                   [&] { return detail::build_scheme(spec, graph, *spec.build_metric, seed); });
                for (const Metric metric : config.metrics) {
                    std::optional<detail::BuiltScheme> own;
                    if (!shared)
                        own = timed(context + ": build " + std::string(to_string(metric)),
                                    [&] { return detail::build_scheme(spec, graph, metric, seed); });
                    const detail::BuiltScheme& scheme = shared ? *shared : *own;
                    const DistanceOracle& oracle = oracle_for(metric);
                    const StretchStats stats =
                        timed(context + ": evaluate " + std::string(to_string(metric)), [&] {
                            return std::visit(
                                [&](const auto& s) { return stretch_distribution(s, sample, oracle, threads); },
                                scheme);
                        });
                    csv::StretchRow row{name, graph_name, seed, metric, stats,
                                        spec.bound.value_or(detail::default_bound(scheme))};
                    record.csv_rows.push_back(csv::format(row));

                    if (config.dump_tables && options.write_files && (own || metric == config.metrics.front())) {
                        auto path = record.output;
                        path.replace_extension("");
                        path += "." + std::to_string(si) + "." +
                                std::string(to_string(spec.build_metric.value_or(metric))) + ".seed" +
                                std::to_string(seed) + ".dump";
                        std::ofstream out(path, std::ios::binary);
                        if (!(out << detail::dump(scheme)))
                            throw Error(ErrorCode::InvalidParameters, "cannot write " + path.string());
                    }
                }
            } catch (const Error& e) {
                throw Error(e.code(), context + ": " + e.what());
            }
        }
    }

    if (options.write_files) {
        std::ofstream out(record.output, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::InvalidParameters, "cannot write " + record.output.string());
        out << csv::kStretchHeader << '\n';
        for (const std::string& row : record.csv_rows)
            out << row << '\n';
    }
    return record;
}

/// Full CSV text (header plus rows) of a run.
inline std::string csv_text(const RunRecord& record) {
    std::string out(csv::kStretchHeader);
    out += '\n';
    for (const std::string& row : record.csv_rows)
        out += row + '\n';
    return out;
}

struct FormulaReport {
    std::uint64_t n;
    std::uint64_t k;
    unsigned level;
    std::uint64_t table_total;
    std::uint64_t stretch_bound;
};

inline FormulaReport formulas(std::uint64_t n, std::uint64_t k) {
    if (n < 1 || k < 2)
        throw Error(ErrorCode::InvalidParameters, "formulas need N >= 1 and k >= 2");
    const unsigned level = min_depth_for_threshold(n, k);
    return {n, k, level, predicted_table_total(n, level), predicted_stretch_bound(level)};
}

inline std::string format_formulas(const FormulaReport& r) {
    std::string out;
    out += "N = " + std::to_string(r.n) + "\n";
    out += "k = " + std::to_string(r.k) + "\n";
    out += "i = " + std::to_string(r.level) + "\n";
    out += "tables per node = " + std::to_string(std::uint64_t{1} << r.level) + "\n";
    out += "predicted table total = " + std::to_string(r.table_total) + "\n";
    out += "stretch bound = " + std::to_string(r.stretch_bound) + "\n";
    return out;
}

} // namespace routelab
