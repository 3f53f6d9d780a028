#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seedrank/graph.hpp"
#include "seedrank/partition.hpp"

namespace seedrank {

/// Per-node real-valued scores for one ranking method, stamped with the
/// fingerprints of the inputs they were computed from.
struct ScoreTable {
    std::string method;
    std::vector<double> values;
    std::uint64_t graph_fingerprint = 0;
    std::uint64_t partition_fingerprint = 0;

    NodeId node_count() const { return static_cast<NodeId>(values.size()); }
};

/// Ordered seed selection: the k best-scoring nodes, score descending with
/// ascending node index breaking ties.
struct SeedSet {
    std::vector<NodeId> nodes;
    double spreader_fraction = 0.0;

    NodeId k() const { return static_cast<NodeId>(nodes.size()); }
};

namespace detail {

inline void check_same_graph(const ScoreTable& a, const ScoreTable& b) {
    if (a.graph_fingerprint != b.graph_fingerprint)
        throw std::invalid_argument("score tables computed from different graphs");
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("score tables of different sizes");
}

/// Banker's rounding, independent of the floating-point environment.
inline double round_half_even(double x) {
    double f = std::floor(x);
    double frac = x - f;
    if (frac > 0.5) return f + 1.0;
    if (frac < 0.5) return f;
    return std::fmod(f, 2.0) == 0.0 ? f : f + 1.0;
}

}  // namespace detail

/// Community diversity: Shannon entropy (natural log) of the community
/// distribution over a node's neighbors. Zero-degree nodes score 0, and a
/// neighborhood confined to one community scores 0; the maximum is
/// ln(#distinct neighbor communities).
inline ScoreTable community_diversity(const Graph& g, const Partition& p) {
    validate_partition(g, p);
    ScoreTable table;
    table.method = "CD";
    table.graph_fingerprint = g.fingerprint();
    table.partition_fingerprint = p.fingerprint();
    table.values.assign(g.node_count(), 0.0);

    std::vector<std::uint32_t> count(p.community_count, 0);
    std::vector<std::uint32_t> touched;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto nbrs = g.neighbors(v);
        if (nbrs.empty()) continue;
        touched.clear();
        for (NodeId u : nbrs) {
            std::uint32_t c = p.assignment[u];
            if (count[c] == 0) touched.push_back(c);
            ++count[c];
        }
        const double total = static_cast<double>(nbrs.size());
        double entropy = 0.0;
        for (std::uint32_t c : touched) {
            double share = count[c] / total;
            entropy -= share * std::log(share);  // share > 0 here; 0*log 0 never arises
            count[c] = 0;
        }
        table.values[v] = std::max(entropy, 0.0);
    }
    return table;
}

/// Two-hop aggregate: a node's CD plus the CD of every neighbor.
inline ScoreTable extended_community_diversity(const Graph& g, const ScoreTable& cd) {
    if (cd.graph_fingerprint != g.fingerprint())
        throw std::invalid_argument("CD table does not match this graph");
    ScoreTable table;
    table.method = "ECD";
    table.graph_fingerprint = cd.graph_fingerprint;
    table.partition_fingerprint = cd.partition_fingerprint;
    table.values.assign(g.node_count(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        double sum = cd.values[v];
        for (NodeId u : g.neighbors(v)) sum += cd.values[u];
        table.values[v] = sum;
    }
    return table;
}

/// Modified community diversity: -P ln P with P = CD/ECD. Conventions
/// 0 * ln 0 := 0 and 0/0 := 0 keep degenerate nodes at 0; the score lies in
/// [0, 1/e], peaking where a node's diversity is a 1/e share of its
/// neighborhood's.
inline ScoreTable modified_community_diversity(const ScoreTable& cd, const ScoreTable& ecd) {
    detail::check_same_graph(cd, ecd);
    ScoreTable table;
    table.method = "MCD";
    table.graph_fingerprint = cd.graph_fingerprint;
    table.partition_fingerprint = cd.partition_fingerprint;
    table.values.assign(cd.values.size(), 0.0);
    for (std::size_t v = 0; v < cd.values.size(); ++v) {
        double num = cd.values[v];
        double den = ecd.values[v];
        if (num <= 0.0 || den <= 0.0) continue;
        double share = num / den;
        if (share >= 1.0) continue;  // -1 * ln 1 = 0
        table.values[v] = -share * std::log(share);
    }
    return table;
}

/// Top-k selection with k = max(1, round-half-even(fraction * n)), capped at
/// n. Ties broken by ascending node index.
inline SeedSet select_top_k(const ScoreTable& scores, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("fraction must be in (0, 1]");
    const NodeId n = scores.node_count();
    if (n == 0) throw std::invalid_argument("empty score table");
    auto k = static_cast<NodeId>(
        std::max(1.0, detail::round_half_even(fraction * static_cast<double>(n))));
    k = std::min(k, n);

    std::vector<NodeId> order(n);
    for (NodeId v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (scores.values[a] != scores.values[b]) return scores.values[a] > scores.values[b];
        return a < b;
    });
    order.resize(k);

    SeedSet seeds;
    seeds.nodes = std::move(order);
    seeds.spreader_fraction = fraction;
    return seeds;
}

/// CSV serialization: `# method=...` comment, header, then one
/// `node_label,score` row per node, score descending (index ascending on
/// ties).
inline void write_score_csv(std::ostream& out, const ScoreTable& table,
                            const NodeLabelMap* labels = nullptr) {
    out << "# method=" << table.method << '\n';
    out << "node_label,score\n";
    std::vector<NodeId> order(table.node_count());
    for (NodeId v = 0; v < order.size(); ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (table.values[a] != table.values[b]) return table.values[a] > table.values[b];
        return a < b;
    });
    for (NodeId v : order) {
        if (labels)
            out << labels->label(v);
        else
            out << v;
        out << ',' << detail::format_double(table.values[v]) << '\n';
    }
}

/// One label per line, selection order.
inline void write_seed_list(std::ostream& out, const SeedSet& seeds,
                            const NodeLabelMap* labels = nullptr) {
    for (NodeId v : seeds.nodes) {
        if (labels)
            out << labels->label(v) << '\n';
        else
            out << v << '\n';
    }
}

}  // namespace seedrank
