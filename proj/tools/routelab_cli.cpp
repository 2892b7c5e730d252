// routelab command-line front end: experiment runner, formula calculator and
// topology generator.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime error.

#include <routelab/routelab.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int run_command(const std::string& config_path, std::optional<std::uint64_t> seed,
                std::optional<std::string> out_dir, std::optional<unsigned> threads) {
    routelab::ExperimentConfig config;
    try {
        config = routelab::validate_config(routelab::detail::read_file(config_path));
    } catch (const routelab::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    routelab::RunOptions options;
    options.seed = seed;
    if (out_dir)
        options.out_dir = *out_dir;
    options.threads = threads;
    try {
        const routelab::RunRecord record = routelab::run_experiment(config, options);
        std::cout << "config " << record.digest << ": " << record.csv_rows.size() << " rows -> "
                  << record.output.string() << '\n';
        for (const auto& t : record.timings)
            std::cerr << "  " << t.phase << ": " << t.seconds << " s\n";
    } catch (const routelab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}

struct GenArgs {
    std::string generator;
    std::size_t n = 0;
    std::size_t attach_m = 2;
    std::optional<double> radius;
    std::size_t domains = 0;
    std::size_t nodes_per_domain = 0;
    std::size_t inter_edges = 0;
    std::size_t cluster_size = 0;
    double bridge_weight = 0.0;
    std::uint64_t seed = 1;
    std::string out = "-";
};

int gen_command(const GenArgs& args) {
    routelab::Graph graph;
    try {
        if (args.generator == "scale_free")
            graph = routelab::generate_scale_free(args.n, args.attach_m, args.seed);
        else if (args.generator == "geometric")
            graph = routelab::generate_geometric(
                args.n, args.radius.value_or(routelab::geometric_connectivity_radius(args.n)), args.seed);
        else if (args.generator == "two_level")
            graph = routelab::generate_two_level(args.domains, args.nodes_per_domain, args.inter_edges, args.seed).graph;
        else
            graph = routelab::generate_ocean(args.cluster_size, args.bridge_weight, args.seed).graph;
    } catch (const routelab::Error& e) {
        std::cerr << "gen failed: " << e.what() << '\n';
        return e.code() == routelab::ErrorCode::InvalidParameters ? kExitConfig : kExitRuntime;
    }

    const std::string text = routelab::write_edge_list(graph);
    if (args.out == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream out(args.out, std::ios::binary);
    if (!(out << text)) {
        std::cerr << "cannot write " << args.out << '\n';
        return kExitRuntime;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"routelab: compact, stacked and hierarchical routing experiments"};
    app.require_subcommand(1);

    // run
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    auto* run = app.add_subcommand("run", "Run an experiment config and write its CSV");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--seed", seed, "Run only this seed instead of the config's list");
    run->add_option("--out-dir", out_dir, "Directory for the CSV output");
    run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    // formulas
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    auto* formulas = app.add_subcommand("formulas", "Depth, table total and stretch bound for N and threshold k");
    formulas->add_option("--n", n, "Node count N")->required();
    formulas->add_option("--k", k, "Per-table size threshold k")->required();

    // gen
    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Generate a topology as an edge list");
    gen->add_option("generator", gen_args.generator, "scale_free | geometric | two_level | ocean")
        ->required()
        ->check(CLI::IsMember({"scale_free", "geometric", "two_level", "ocean"}));
    gen->add_option("--n", gen_args.n, "Node count (scale_free, geometric)");
    gen->add_option("--attach-m", gen_args.attach_m, "Links per new node (scale_free)");
    gen->add_option("--radius", gen_args.radius, "Connection radius (geometric; default: connectivity radius)");
    gen->add_option("--domains", gen_args.domains, "Domain count (two_level)");
    gen->add_option("--nodes-per-domain", gen_args.nodes_per_domain, "Members per domain (two_level)");
    gen->add_option("--inter-edges", gen_args.inter_edges, "Border links (two_level)");
    gen->add_option("--cluster-size", gen_args.cluster_size, "Clique size (ocean)");
    gen->add_option("--bridge-weight", gen_args.bridge_weight, "Short bridge weight (ocean)");
    gen->add_option("--seed", gen_args.seed, "Generator seed");
    gen->add_option("--out", gen_args.out, "Output edge-list path, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (*run)
        return run_command(config_path, seed, out_dir, threads);
    if (*formulas) {
        try {
            std::cout << routelab::format_formulas(routelab::formulas(n, k));
        } catch (const routelab::Error& e) {
            std::cerr << "formulas: " << e.what() << '\n';
            return kExitConfig;
        }
        return 0;
    }
    return gen_command(gen_args);
}
