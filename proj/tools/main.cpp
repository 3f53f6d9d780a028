// Command-line front end: scoring, community detection, cascade simulation,
// and the full experiment protocol. One subcommand per task; exit code 0 on
// success, 1 with a diagnostic on stderr otherwise.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "seedrank/seedrank.hpp"

namespace fs = std::filesystem;
using namespace seedrank;

namespace {

std::pair<Graph, NodeLabelMap> load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file " + path);
    LoadReport report;
    auto result = load_edge_list(in, {}, &report);
    if (report.duplicate_edges || report.self_loops)
        std::cerr << "note: dropped " << report.duplicate_edges << " duplicate edge(s) and "
                  << report.self_loops << " self-loop(s); " << report.arcs_parsed
                  << " arcs read, " << report.edges << " edges kept\n";
    return result;
}

/// Stream that is either stdout ("-") or a file.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<NodeId> read_seed_file(const std::string& path, const NodeLabelMap& labels) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open seed file " + path);
    std::vector<NodeId> seeds;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        std::string label = line.substr(start);
        auto id = labels.find(label);
        if (!id) throw std::runtime_error("seed label '" + label + "' not in graph");
        seeds.push_back(*id);
    }
    if (seeds.empty()) throw std::runtime_error("seed file " + path + " is empty");
    return seeds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"seed-node ranking and influence-spread experiments on undirected networks"};
    app.require_subcommand(1);

    // --- gen-ba ---------------------------------------------------------
    struct {
        NodeId nodes = 0;
        NodeId edges_per_node = 1;
        std::uint64_t seed = 0;
        std::string out = "-";
    } gen;
    auto* gen_cmd = app.add_subcommand("gen-ba", "generate a preferential-attachment graph");
    gen_cmd->add_option("--nodes", gen.nodes, "node count")->required();
    gen_cmd->add_option("--edges-per-node", gen.edges_per_node, "edges attached per new node")
        ->required();
    gen_cmd->add_option("--seed", gen.seed, "rng seed");
    gen_cmd->add_option("--out", gen.out, "output edge list ('-' for stdout)");

    // --- communities ------------------------------------------------------
    struct {
        std::string graph;
        std::uint64_t seed = 0;
        double resolution = 1.0;
        int max_iterations = 100;
        std::string out = "-";
    } comm;
    auto* comm_cmd = app.add_subcommand("communities", "detect communities (Leiden, modularity)");
    comm_cmd->add_option("--graph", comm.graph, "edge list file")->required();
    comm_cmd->add_option("--seed", comm.seed, "rng seed");
    comm_cmd->add_option("--resolution", comm.resolution, "resolution parameter");
    comm_cmd->add_option("--max-iterations", comm.max_iterations, "pass cap");
    comm_cmd->add_option("--out", comm.out, "partition CSV ('-' for stdout)");

    // --- score ------------------------------------------------------------
    struct {
        std::string graph;
        std::string method = "MCD";
        std::uint64_t seed = 0;
        double resolution = 1.0;
        std::string out = "-";
        double fraction = 0.0;
        std::string seeds_out;
    } score;
    auto* score_cmd = app.add_subcommand("score", "rank nodes with one method");
    score_cmd->add_option("--graph", score.graph, "edge list file")->required();
    score_cmd->add_option("--method", score.method, "MCD, CSR-CD, PR, HI, or DEG");
    score_cmd->add_option("--seed", score.seed, "rng seed for community detection");
    score_cmd->add_option("--resolution", score.resolution, "Leiden resolution");
    score_cmd->add_option("--out", score.out, "score CSV ('-' for stdout)");
    score_cmd->add_option("--fraction", score.fraction,
                          "spreader fraction for --seeds-out (in (0,1])");
    score_cmd->add_option("--seeds-out", score.seeds_out, "write top-k seed labels here");

    // --- simulate -----------------------------------------------------------
    struct {
        std::string graph;
        std::string seeds;
        double prob = 0.1;
        int runs = 100;
        std::uint64_t seed = 0;
        std::string out = "-";
        std::string method = "-";
        std::string dataset = "-";
        double fraction = 0.0;
    } sim;
    auto* sim_cmd = app.add_subcommand("simulate", "independent-cascade spread from a seed file");
    sim_cmd->add_option("--graph", sim.graph, "edge list file")->required();
    sim_cmd->add_option("--seeds", sim.seeds, "file with one seed label per line")->required();
    sim_cmd->add_option("--prob", sim.prob, "activation probability");
    sim_cmd->add_option("--runs", sim.runs, "number of simulations");
    sim_cmd->add_option("--seed", sim.seed, "rng seed");
    sim_cmd->add_option("--out", sim.out, "outcome CSV ('-' for stdout)");
    sim_cmd->add_option("--method", sim.method, "method label for the CSV row");
    sim_cmd->add_option("--dataset", sim.dataset, "dataset label for the CSV row");
    sim_cmd->add_option("--fraction", sim.fraction, "fraction label for the CSV row");

    // --- experiment ---------------------------------------------------------
    struct {
        std::string config;
        std::string out;
    } exp;
    auto* exp_cmd = app.add_subcommand("experiment", "run the full protocol from a JSON config");
    exp_cmd->add_option("--config", exp.config, "experiment config (JSON)")->required();
    exp_cmd->add_option("--out", exp.out, "override the config's output_dir");

    // --- stats ---------------------------------------------------------------
    struct {
        std::string bundle;
        std::string control = "MCD";
        std::string out;
    } st;
    auto* st_cmd = app.add_subcommand("stats", "rebuild rank/post-hoc reports from a bundle");
    st_cmd->add_option("--bundle", st.bundle, "experiment output directory")->required();
    st_cmd->add_option("--control", st.control, "control method name");
    st_cmd->add_option("--out", st.out, "report directory (default <bundle>/stats)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen_cmd) {
            Graph g = generate_ba(gen.nodes, gen.edges_per_node, gen.seed);
            OutputTarget out(gen.out);
            save_edge_list(out.stream(), g);
            std::cerr << "generated " << g.node_count() << " nodes, " << g.edge_count()
                      << " edges\n";
        } else if (*comm_cmd) {
            auto [g, labels] = load_graph_file(comm.graph);
            QualityConfig cfg;
            cfg.rng_seed = comm.seed;
            cfg.resolution = comm.resolution;
            cfg.max_iterations = comm.max_iterations;
            Partition p = leiden(g, cfg);
            OutputTarget out(comm.out);
            write_partition_csv(out.stream(), p, &labels);
            std::cerr << p.community_count << " communities, modularity "
                      << detail::format_double(quality(g, p, cfg)) << '\n';
        } else if (*score_cmd) {
            auto method = parse_method(score.method);
            if (!method) throw std::runtime_error("unknown method '" + score.method + "'");
            auto [g, labels] = load_graph_file(score.graph);
            QualityConfig cfg;
            cfg.rng_seed = score.seed;
            cfg.resolution = score.resolution;
            ScoreTable table = rank_nodes(*method, g, cfg);
            OutputTarget out(score.out);
            write_score_csv(out.stream(), table, &labels);
            if (!score.seeds_out.empty()) {
                if (score.fraction <= 0.0)
                    throw std::runtime_error("--seeds-out needs --fraction in (0,1]");
                SeedSet seeds = select_top_k(table, score.fraction);
                std::ofstream seeds_file(score.seeds_out);
                if (!seeds_file)
                    throw std::runtime_error("cannot open " + score.seeds_out);
                write_seed_list(seeds_file, seeds, &labels);
            }
        } else if (*sim_cmd) {
            auto [g, labels] = load_graph_file(sim.graph);
            SeedSet seeds;
            seeds.nodes = read_seed_file(sim.seeds, labels);
            seeds.spreader_fraction =
                sim.fraction > 0.0
                    ? sim.fraction
                    : static_cast<double>(seeds.nodes.size()) / g.node_count();
            CascadeConfig cfg;
            cfg.activation_probability = sim.prob;
            cfg.runs = sim.runs;
            cfg.rng_seed = sim.seed;
            CascadeOutcome outcome = estimate_spread(g, seeds, cfg);
            OutputTarget out(sim.out);
            write_outcome_csv_header(out.stream());
            write_outcome_csv_row(out.stream(), sim.method, sim.dataset,
                                  seeds.spreader_fraction, sim.prob, sim.runs, outcome);
        } else if (*exp_cmd) {
            ExperimentConfig cfg = ExperimentConfig::from_json_file(exp.config);
            if (!exp.out.empty()) cfg.output_dir = exp.out;
            ExperimentResults results = run_experiment(cfg);
            std::cerr << "wrote " << results.cells.size() << " cells to " << cfg.output_dir
                      << '\n';
            if (!results.errors.empty()) {
                std::cerr << results.errors.size() << " cell(s) failed; see errors.csv\n";
                return 1;
            }
        } else if (*st_cmd) {
            fs::path bundle(st.bundle);
            std::ifstream results_file(bundle / "results.csv");
            if (!results_file)
                throw std::runtime_error("no results.csv under " + st.bundle);
            auto rows = detail::read_results_csv(results_file);
            if (rows.empty()) throw std::runtime_error("results.csv has no data rows");
            std::vector<std::string> methods;
            for (const auto& row : rows)
                if (std::find(methods.begin(), methods.end(), row.method) == methods.end())
                    methods.push_back(row.method);
            if (std::find(methods.begin(), methods.end(), st.control) == methods.end())
                throw std::runtime_error("control '" + st.control + "' not present in results");
            fs::path out_dir = st.out.empty() ? bundle / "stats" : fs::path(st.out);
            write_stats_reports(rows, methods, st.control, out_dir, std::cerr);
            std::cerr << "reports written to " << out_dir.string() << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
