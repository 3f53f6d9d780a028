#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "seedrank/cascade.hpp"
#include "seedrank/generate.hpp"
#include "seedrank/graph.hpp"
#include "seedrank/leiden.hpp"
#include "seedrank/metrics.hpp"
#include "seedrank/ranking.hpp"
#include "seedrank/stats.hpp"

namespace seedrank {

struct BaSpec {
    NodeId nodes = 0;
    NodeId edges_per_node = 1;
    std::uint64_t seed = 0;
};

/// A dataset is either an edge-list file or a generated graph.
struct DatasetSpec {
    std::string name;
    std::string path;              // edge-list file, when not generated
    std::optional<BaSpec> ba;      // generator spec, when set
};

struct ExperimentConfig {
    int version = 1;
    std::vector<DatasetSpec> datasets;
    std::vector<Method> methods;
    std::vector<double> fractions;  // empty: auto per dataset size
    double activation_probability = 0.1;
    int runs = 100;
    std::uint64_t rng_seed = 0;
    std::string output_dir = "out";
    int workers = 1;
    double leiden_resolution = 1.0;
    int leiden_max_iterations = 100;
    bool measure_timing = false;
    std::string control = "MCD";

    void validate() const {
        if (datasets.empty()) throw std::invalid_argument("config: at least one dataset required");
        if (methods.size() < 2)
            throw std::invalid_argument("config: at least two methods required for comparison");
        for (const auto& d : datasets) {
            if (d.name.empty()) throw std::invalid_argument("config: dataset name missing");
            if (d.name.find_first_not_of(
                    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-") !=
                std::string::npos)
                throw std::invalid_argument("config: dataset name '" + d.name +
                                            "' may only use [A-Za-z0-9._-]");
            if (!d.ba && d.path.empty())
                throw std::invalid_argument("config: dataset '" + d.name +
                                            "' needs a path or a generator spec");
        }
        for (double f : fractions)
            if (!(f > 0.0) || f > 1.0)
                throw std::invalid_argument("config: fractions must lie in (0, 1]");
        if (!(activation_probability >= 0.0) || activation_probability > 1.0)
            throw std::invalid_argument("config: activation_probability must lie in [0, 1]");
        if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
        if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
        std::set<std::string> names;
        for (const auto& d : datasets)
            if (!names.insert(d.name).second)
                throw std::invalid_argument("config: duplicate dataset name '" + d.name + "'");
        std::set<Method> seen;
        for (Method m : methods)
            if (!seen.insert(m).second)
                throw std::invalid_argument("config: duplicate method");
    }

    static ExperimentConfig from_json(const nlohmann::json& j) {
        ExperimentConfig cfg;
        cfg.version = j.value("version", 1);
        if (cfg.version != 1)
            throw std::invalid_argument("config: unsupported version " +
                                        std::to_string(cfg.version));
        if (!j.contains("datasets")) throw std::invalid_argument("config: 'datasets' missing");
        for (const auto& d : j.at("datasets")) {
            DatasetSpec spec;
            spec.name = d.value("name", "");
            spec.path = d.value("path", "");
            if (d.contains("ba")) {
                BaSpec ba;
                ba.nodes = d.at("ba").at("nodes").get<NodeId>();
                ba.edges_per_node = d.at("ba").at("edges_per_node").get<NodeId>();
                ba.seed = d.at("ba").value("seed", 0ull);
                spec.ba = ba;
            }
            cfg.datasets.push_back(std::move(spec));
        }
        if (!j.contains("methods")) throw std::invalid_argument("config: 'methods' missing");
        for (const auto& name : j.at("methods")) {
            auto m = parse_method(name.get<std::string>());
            if (!m)
                throw std::invalid_argument("config: unknown method '" +
                                            name.get<std::string>() + "'");
            cfg.methods.push_back(*m);
        }
        if (j.contains("fractions") && !j.at("fractions").is_string())
            for (const auto& f : j.at("fractions")) cfg.fractions.push_back(f.get<double>());
        cfg.activation_probability = j.value("activation_probability", 0.1);
        cfg.runs = j.value("runs", 100);
        cfg.rng_seed = j.value("rng_seed", 0ull);
        cfg.output_dir = j.value("output_dir", "out");
        cfg.workers = j.value("workers", 1);
        cfg.measure_timing = j.value("measure_timing", false);
        cfg.control = j.value("control", "MCD");
        if (j.contains("leiden")) {
            cfg.leiden_resolution = j.at("leiden").value("resolution", 1.0);
            cfg.leiden_max_iterations = j.at("leiden").value("max_iterations", 100);
        }
        cfg.validate();
        return cfg;
    }

    static ExperimentConfig from_json_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file " + path.string());
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["version"] = version;
        j["rng_seed"] = rng_seed;
        j["activation_probability"] = activation_probability;
        j["runs"] = runs;
        j["workers"] = workers;
        j["output_dir"] = output_dir;
        j["measure_timing"] = measure_timing;
        j["control"] = control;
        j["leiden"] = {{"resolution", leiden_resolution},
                       {"max_iterations", leiden_max_iterations}};
        if (fractions.empty())
            j["fractions"] = "auto";
        else
            j["fractions"] = fractions;
        j["methods"] = nlohmann::json::array();
        for (Method m : methods) j["methods"].push_back(std::string(method_name(m)));
        j["datasets"] = nlohmann::json::array();
        for (const auto& d : datasets) {
            nlohmann::json dj;
            dj["name"] = d.name;
            if (d.ba)
                dj["ba"] = {{"nodes", d.ba->nodes},
                            {"edges_per_node", d.ba->edges_per_node},
                            {"seed", d.ba->seed}};
            else
                dj["path"] = d.path;
            j["datasets"].push_back(std::move(dj));
        }
        return j;
    }
};

/// Spreader fractions used when the config says "auto": networks under 2000
/// nodes get {0.02 .. 0.1} in steps of 0.01, larger ones (2000 included)
/// get {0.005 .. 0.04} in steps of 0.005.
inline std::vector<double> auto_fractions(NodeId n) {
    if (n < 1) throw std::invalid_argument("node count must be >= 1");
    std::vector<double> out;
    if (n < 2000)
        for (int permille = 20; permille <= 100; permille += 10)
            out.push_back(permille / 1000.0);
    else
        for (int permille = 5; permille <= 40; permille += 5)
            out.push_back(permille / 1000.0);
    return out;
}

struct CellOutcome {
    MetricCell metric;
    CascadeOutcome cascade;
    NodeId k = 0;
    bool failed = false;
    std::string error;
};

struct DatasetRun {
    std::string name;
    NodeId nodes = 0;
    std::size_t edges = 0;
    std::vector<double> fractions;
};

struct ExperimentResults {
    ExperimentConfig config;
    std::vector<DatasetRun> datasets;
    std::vector<CellOutcome> cells;  // dataset-major, then method, then fraction
    std::vector<std::string> errors;
};

namespace detail {

struct ResultRow {
    std::string method;
    std::string dataset;
    double fraction = 0.0;
    double scale = 0.0;
    std::optional<double> ls;
    std::uint32_t unreachable = 0;
};

inline std::vector<ResultRow> read_results_csv(std::istream& in) {
    std::vector<ResultRow> rows;
    std::string line;
    bool header = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto fields = split_char(line, ',');
        if (fields.size() != 7)
            throw std::runtime_error("results.csv line " + std::to_string(line_no) +
                                     ": expected 7 fields");
        ResultRow row;
        row.method = std::string(fields[0]);
        row.dataset = std::string(fields[1]);
        row.fraction = parse_double(fields[2]);
        row.scale = parse_double(fields[3]);
        if (fields[4] != "NA") row.ls = parse_double(fields[4]);
        row.unreachable = static_cast<std::uint32_t>(parse_double(fields[5]));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Problems are (dataset, fraction) cells in first-appearance order; a
/// problem missing any method's value (or, for ls, any defined distance) is
/// dropped with a warning.
inline std::optional<RankMatrix> build_rank_matrix(const std::vector<ResultRow>& rows,
                                                   const std::vector<std::string>& methods,
                                                   bool use_ls, std::ostream& warn) {
    std::vector<std::pair<std::string, double>> problems;
    std::map<std::pair<std::string, double>, std::map<std::string, double>> table;
    for (const auto& row : rows) {
        std::pair<std::string, double> key{row.dataset, row.fraction};
        auto [it, inserted] = table.try_emplace(key);
        if (inserted) problems.push_back(key);
        if (use_ls) {
            if (row.ls) it->second[row.method] = *row.ls;
        } else {
            it->second[row.method] = row.scale;
        }
    }

    std::vector<std::string> problem_names;
    std::vector<std::vector<double>> values;
    for (const auto& key : problems) {
        const auto& cells = table[key];
        std::vector<double> row;
        bool complete = true;
        for (const auto& m : methods) {
            auto it = cells.find(m);
            if (it == cells.end()) {
                complete = false;
                break;
            }
            row.push_back(it->second);
        }
        std::string pname = key.first + "@" + format_double(key.second);
        if (!complete) {
            warn << "warning: dropping problem " << pname << " ("
                 << (use_ls ? "ls" : "scale") << "): incomplete methods\n";
            continue;
        }
        problem_names.push_back(std::move(pname));
        values.push_back(std::move(row));
    }
    if (problem_names.empty()) return std::nullopt;
    return rank_rows(methods, problem_names, values, Direction::kHigherIsBetter);
}

}  // namespace detail

/// Per-dataset plot data: one file per metric with a `fraction` column plus
/// one column per method in config order. Missing cells are left blank and
/// reported on `warn`.
inline void emit_plot_data(const ExperimentResults& results, const std::filesystem::path& dir,
                           std::ostream& warn) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto& cfg = results.config;
    std::size_t cell = 0;
    std::vector<std::vector<const CellOutcome*>> by_dataset(results.datasets.size());
    for (std::size_t d = 0; d < results.datasets.size(); ++d)
        for (std::size_t m = 0; m < cfg.methods.size(); ++m)
            for (std::size_t f = 0; f < results.datasets[d].fractions.size(); ++f)
                by_dataset[d].push_back(&results.cells[cell++]);

    for (std::size_t d = 0; d < results.datasets.size(); ++d) {
        const auto& run = results.datasets[d];
        const std::size_t nf = run.fractions.size();
        for (bool use_ls : {false, true}) {
            std::ofstream out(dir / (run.name + (use_ls ? "_ls.csv" : "_scale.csv")));
            out << "fraction";
            for (Method m : cfg.methods) out << ',' << method_name(m);
            out << '\n';
            for (std::size_t f = 0; f < nf; ++f) {
                out << detail::format_double(run.fractions[f]);
                for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                    const CellOutcome& c = *by_dataset[d][m * nf + f];
                    out << ',';
                    if (c.failed || (use_ls && !c.metric.avg_spreader_distance)) {
                        warn << "warning: blank plot cell " << run.name << '/'
                             << method_name(cfg.methods[m]) << '@'
                             << detail::format_double(run.fractions[f]) << '\n';
                    } else {
                        out << detail::format_double(use_ls ? *c.metric.avg_spreader_distance
                                                            : c.metric.final_infected_scale);
                    }
                }
                out << '\n';
            }
        }
    }
}

/// Writes rank and post-hoc CSVs for both metrics from result rows.
inline void write_stats_reports(const std::vector<detail::ResultRow>& rows,
                                const std::vector<std::string>& methods,
                                const std::string& control, const std::filesystem::path& dir,
                                std::ostream& warn) {
    std::filesystem::create_directories(dir);
    for (bool use_ls : {false, true}) {
        const char* metric = use_ls ? "ls" : "scale";
        auto rm = detail::build_rank_matrix(rows, methods, use_ls, warn);
        if (!rm || rm->problem_count() < 2) {
            warn << "warning: not enough complete problems for " << metric << " statistics\n";
            continue;
        }
        TestReport report = compare_with_control(*rm, control);
        std::ofstream ranks(dir / (std::string(metric) + "_ranks.csv"));
        write_rank_csv(ranks, *rm, report.friedman, rm->problem_count());
        std::ofstream posthoc(dir / (std::string(metric) + "_posthoc.csv"));
        write_posthoc_csv(posthoc, report);
    }
}

/// Runs the full protocol: for every dataset, rank nodes with every method,
/// select seeds per fraction, estimate spread, and write the results bundle
/// (metric rows, cascade rows, partitions, score tables, plot data,
/// statistical reports). Deterministic for a fixed config, whatever the
/// worker count: cascade coins for a cell depend only on
/// (rng_seed, dataset, method, run), so fractions of one method share run
/// randomness and every file is written in fixed order.
inline ExperimentResults run_experiment(const ExperimentConfig& cfg,
                                        std::ostream& warn = std::cerr) {
    namespace fs = std::filesystem;
    cfg.validate();

    ExperimentResults results;
    results.config = cfg;

    fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    fs::create_directories(out_dir / "partitions");
    fs::create_directories(out_dir / "scores");

    struct LoadedDataset {
        Graph graph;
        NodeLabelMap labels;
        std::vector<double> fractions;
        std::vector<ScoreTable> scores;       // per method; empty values on failure
        std::vector<std::string> score_error;  // per method; empty if ok
        std::vector<std::optional<double>> ranking_seconds;
        std::optional<Partition> partition;
    };
    std::vector<LoadedDataset> loaded;

    for (std::size_t d = 0; d < cfg.datasets.size(); ++d) {
        const DatasetSpec& spec = cfg.datasets[d];
        LoadedDataset ds;
        if (spec.ba) {
            ds.graph = generate_ba(spec.ba->nodes, spec.ba->edges_per_node, spec.ba->seed);
            ds.labels = NodeLabelMap::identity(ds.graph.node_count());
        } else {
            std::ifstream in(spec.path);
            if (!in)
                throw std::runtime_error("dataset '" + spec.name + "': cannot open " + spec.path);
            try {
                auto [g, labels] = load_edge_list(in);
                ds.graph = std::move(g);
                ds.labels = std::move(labels);
            } catch (const std::exception& e) {
                throw std::runtime_error("dataset '" + spec.name + "': " + e.what());
            }
        }
        if (ds.graph.node_count() == 0)
            throw std::runtime_error("dataset '" + spec.name + "' is empty");

        ds.fractions = cfg.fractions.empty() ? auto_fractions(ds.graph.node_count())
                                             : cfg.fractions;

        QualityConfig leiden_cfg;
        leiden_cfg.resolution = cfg.leiden_resolution;
        leiden_cfg.max_iterations = cfg.leiden_max_iterations;
        leiden_cfg.rng_seed = rng::mix(cfg.rng_seed, rng::mix(0xC0DEull, d));

        bool any_community_method = false;
        for (Method m : cfg.methods) any_community_method |= needs_partition(m);

        ds.scores.resize(cfg.methods.size());
        ds.score_error.resize(cfg.methods.size());
        ds.ranking_seconds.resize(cfg.methods.size());
        if (any_community_method) {
            try {
                ds.partition = leiden(ds.graph, leiden_cfg);
            } catch (const std::exception& e) {
                warn << "warning: leiden failed on '" << spec.name << "': " << e.what() << '\n';
            }
        }
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            try {
                if (needs_partition(cfg.methods[m]) && !ds.partition)
                    throw std::runtime_error("no partition available");
                ds.scores[m] = rank_nodes(cfg.methods[m], ds.graph,
                                          ds.partition ? &*ds.partition : nullptr);
                if (cfg.measure_timing) {
                    TimingStats t = time_ranking(cfg.methods[m], ds.graph, leiden_cfg, 1);
                    ds.ranking_seconds[m] = t.median_seconds;
                }
            } catch (const std::exception& e) {
                ds.score_error[m] = e.what();
                results.errors.push_back("score " + spec.name + "/" +
                                         std::string(method_name(cfg.methods[m])) + ": " +
                                         e.what());
            }
        }

        DatasetRun run;
        run.name = spec.name;
        run.nodes = ds.graph.node_count();
        run.edges = ds.graph.edge_count();
        run.fractions = ds.fractions;
        results.datasets.push_back(std::move(run));
        loaded.push_back(std::move(ds));
    }

    // One job per (dataset, method, fraction) cell.
    struct Job {
        std::size_t dataset, method, fraction;
        std::size_t slot;
    };
    std::vector<Job> jobs;
    std::size_t total_cells = 0;
    for (std::size_t d = 0; d < loaded.size(); ++d)
        for (std::size_t m = 0; m < cfg.methods.size(); ++m)
            for (std::size_t f = 0; f < loaded[d].fractions.size(); ++f)
                jobs.push_back({d, m, f, total_cells++});
    results.cells.resize(total_cells);

    auto run_job = [&](const Job& job) {
        const LoadedDataset& ds = loaded[job.dataset];
        const Method method = cfg.methods[job.method];
        const double fraction = ds.fractions[job.fraction];
        CellOutcome& cell = results.cells[job.slot];
        cell.metric.method = std::string(method_name(method));
        cell.metric.dataset = cfg.datasets[job.dataset].name;
        cell.metric.fraction = fraction;
        cell.metric.ranking_seconds = ds.ranking_seconds[job.method];
        try {
            if (!ds.score_error[job.method].empty())
                throw std::runtime_error("scoring failed: " + ds.score_error[job.method]);
            SeedSet seeds = select_top_k(ds.scores[job.method], fraction);
            cell.k = seeds.k();

            CascadeConfig cascade_cfg;
            cascade_cfg.activation_probability = cfg.activation_probability;
            cascade_cfg.runs = cfg.runs;
            cascade_cfg.rng_seed =
                rng::mix(cfg.rng_seed, rng::mix(0x5EEDull, rng::mix(job.dataset, job.method)));
            cell.cascade = estimate_spread(ds.graph, seeds, cascade_cfg);
            cell.metric.final_infected_scale =
                final_infected_scale(cell.cascade, ds.graph.node_count());
            if (seeds.k() >= 2) {
                SpreaderDistance sd = avg_spreader_distance(ds.graph, seeds);
                cell.metric.avg_spreader_distance = sd.mean;
                cell.metric.unreachable_pairs = sd.unreachable_pairs;
            }
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
        }
    };

    if (cfg.workers == 1) {
        for (const Job& job : jobs) run_job(job);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> pool;
        int count = std::min<int>(cfg.workers, static_cast<int>(jobs.size()));
        for (int w = 0; w < count; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t i = cursor.fetch_add(1);
                    if (i >= jobs.size()) return;
                    run_job(jobs[i]);
                }
            });
        for (auto& t : pool) t.join();
    }

    for (const CellOutcome& cell : results.cells)
        if (cell.failed)
            results.errors.push_back("cell " + cell.metric.dataset + "/" + cell.metric.method +
                                     "@" + detail::format_double(cell.metric.fraction) + ": " +
                                     cell.error);

    // Serialize the bundle in fixed order.
    {
        std::ofstream out(out_dir / "config.json");
        out << cfg.to_json().dump(2) << '\n';
    }
    {
        std::ofstream out(out_dir / "results.csv");
        write_metric_csv_header(out);
        for (const CellOutcome& cell : results.cells)
            if (!cell.failed) write_metric_csv_row(out, cell.metric);
    }
    {
        std::ofstream out(out_dir / "cascades.csv");
        write_outcome_csv_header(out);
        for (const CellOutcome& cell : results.cells)
            if (!cell.failed)
                write_outcome_csv_row(out, cell.metric.method, cell.metric.dataset,
                                      cell.metric.fraction, cfg.activation_probability, cfg.runs,
                                      cell.cascade);
    }
    for (std::size_t d = 0; d < loaded.size(); ++d) {
        if (loaded[d].partition) {
            std::ofstream out(out_dir / "partitions" / (cfg.datasets[d].name + ".csv"));
            write_partition_csv(out, *loaded[d].partition, &loaded[d].labels);
        }
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            if (!loaded[d].score_error[m].empty()) continue;
            std::ofstream out(out_dir / "scores" /
                              (cfg.datasets[d].name + "__" +
                               std::string(method_name(cfg.methods[m])) + ".csv"));
            write_score_csv(out, loaded[d].scores[m], &loaded[d].labels);
        }
    }
    emit_plot_data(results, out_dir / "plots", warn);

    {
        std::vector<detail::ResultRow> rows;
        for (const CellOutcome& cell : results.cells) {
            if (cell.failed) continue;
            detail::ResultRow row;
            row.method = cell.metric.method;
            row.dataset = cell.metric.dataset;
            row.fraction = cell.metric.fraction;
            row.scale = cell.metric.final_infected_scale;
            row.ls = cell.metric.avg_spreader_distance;
            row.unreachable = cell.metric.unreachable_pairs;
            rows.push_back(std::move(row));
        }
        std::vector<std::string> method_names;
        for (Method m : cfg.methods) method_names.emplace_back(method_name(m));
        std::string control = cfg.control;
        bool have_control = false;
        for (const auto& name : method_names) have_control |= name == control;
        if (!have_control) {
            warn << "warning: control '" << control << "' not among methods; using "
                 << method_names.front() << '\n';
            control = method_names.front();
        }
        write_stats_reports(rows, method_names, control, out_dir / "stats", warn);
    }

    if (!results.errors.empty()) {
        std::ofstream out(out_dir / "errors.csv");
        out << "error\n";
        for (const auto& e : results.errors) out << e << '\n';
    }
    return results;
}

}  // namespace seedrank
