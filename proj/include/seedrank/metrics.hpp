#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seedrank/cascade.hpp"
#include "seedrank/graph.hpp"
#include "seedrank/ranking.hpp"
#include "seedrank/scores.hpp"

namespace seedrank {

/// One (method, dataset, fraction) evaluation cell.
struct MetricCell {
    std::string method;
    std::string dataset;
    double fraction = 0.0;
    double final_infected_scale = 0.0;
    std::optional<double> avg_spreader_distance;  // empty: < 2 seeds or no reachable pair
    std::uint32_t unreachable_pairs = 0;
    std::optional<double> ranking_seconds;  // empty unless timing was requested
};

inline double final_infected_scale(const CascadeOutcome& outcome, NodeId node_count) {
    if (node_count == 0) throw std::invalid_argument("node count must be positive");
    return outcome.mean_infected / static_cast<double>(node_count);
}

struct SpreaderDistance {
    std::optional<double> mean;  // over mutually reachable seed pairs
    std::uint32_t unreachable_pairs = 0;
};

/// Mean BFS hop distance over all unordered seed pairs. Unreachable pairs
/// are counted separately and excluded from the mean; if no pair is
/// reachable the mean is absent.
inline SpreaderDistance avg_spreader_distance(const Graph& g, const SeedSet& seeds) {
    if (seeds.nodes.size() < 2)
        throw std::invalid_argument("spreader distance needs at least 2 seeds");
    SpreaderDistance result;
    double sum = 0.0;
    std::size_t finite = 0;
    for (std::size_t i = 0; i < seeds.nodes.size(); ++i) {
        auto dist = bfs_distances(g, seeds.nodes[i]);
        for (std::size_t j = i + 1; j < seeds.nodes.size(); ++j) {
            std::int32_t d = dist[seeds.nodes[j]];
            if (is_reachable(d)) {
                sum += d;
                ++finite;
            } else {
                ++result.unreachable_pairs;
            }
        }
    }
    if (finite > 0) result.mean = sum / static_cast<double>(finite);
    return result;
}

struct TimingStats {
    double median_seconds = 0.0;
    double min_seconds = 0.0;
    int repetitions = 0;
};

/// Wall-clock cost of the complete ranking pipeline (community detection
/// included where the method needs it), repeated and summarized as
/// median/min.
inline TimingStats time_ranking(Method m, const Graph& g, const QualityConfig& cfg,
                                int repetitions = 1) {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    std::vector<double> samples(repetitions);
    for (int i = 0; i < repetitions; ++i) {
        auto start = std::chrono::steady_clock::now();
        ScoreTable table = rank_nodes(m, g, cfg);
        auto stop = std::chrono::steady_clock::now();
        (void)table;
        samples[i] = std::chrono::duration<double>(stop - start).count();
    }
    std::sort(samples.begin(), samples.end());
    TimingStats stats;
    stats.repetitions = repetitions;
    stats.min_seconds = samples.front();
    stats.median_seconds = samples[samples.size() / 2];
    return stats;
}

inline void write_metric_csv_header(std::ostream& out) {
    out << "method,dataset,fraction,scale,ls,unreachable,ranking_seconds\n";
}

inline void write_metric_csv_row(std::ostream& out, const MetricCell& cell) {
    out << cell.method << ',' << cell.dataset << ',' << detail::format_double(cell.fraction)
        << ',' << detail::format_double(cell.final_infected_scale) << ',';
    if (cell.avg_spreader_distance)
        out << detail::format_double(*cell.avg_spreader_distance);
    else
        out << "NA";
    out << ',' << cell.unreachable_pairs << ',';
    if (cell.ranking_seconds)
        out << detail::format_double(*cell.ranking_seconds);
    else
        out << "NA";
    out << '\n';
}

}  // namespace seedrank
