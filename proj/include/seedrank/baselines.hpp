#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "seedrank/graph.hpp"
#include "seedrank/partition.hpp"
#include "seedrank/scores.hpp"

namespace seedrank {

/// score(v) = degree(v).
inline ScoreTable degree_rank(const Graph& g) {
    ScoreTable table;
    table.method = "DEG";
    table.graph_fingerprint = g.fingerprint();
    table.values.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        table.values[v] = static_cast<double>(g.degree(v));
    return table;
}

/// score(v) = largest h such that at least h neighbors of v have degree >= h.
inline ScoreTable h_index_rank(const Graph& g) {
    ScoreTable table;
    table.method = "HI";
    table.graph_fingerprint = g.fingerprint();
    table.values.resize(g.node_count());
    std::vector<NodeId> nbr_degrees;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        nbr_degrees.clear();
        for (NodeId u : g.neighbors(v)) nbr_degrees.push_back(g.degree(u));
        std::sort(nbr_degrees.begin(), nbr_degrees.end(), std::greater<>());
        NodeId h = 0;
        while (h < nbr_degrees.size() && nbr_degrees[h] >= h + 1) ++h;
        table.values[v] = static_cast<double>(h);
    }
    return table;
}

struct PageRankResult {
    ScoreTable scores;
    int iterations = 0;
    bool converged = false;
};

/// Power iteration on the undirected random walk with uniform teleport.
/// Zero-degree nodes redistribute their mass uniformly. Scores sum to 1;
/// convergence is an L1 change below `tol`. A run that exhausts max_iter
/// comes back with converged == false rather than failing silently.
inline PageRankResult pagerank_rank(const Graph& g, double damping = 0.85, double tol = 1e-10,
                                    int max_iter = 1000) {
    if (!(damping > 0.0) || !(damping < 1.0))
        throw std::invalid_argument("damping must be in (0, 1)");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

    PageRankResult result;
    result.scores.method = "PR";
    result.scores.graph_fingerprint = g.fingerprint();
    const NodeId n = g.node_count();
    if (n == 0) {
        result.converged = true;
        return result;
    }

    std::vector<double> rank(n, 1.0 / n);
    std::vector<double> next(n);
    for (int iter = 0; iter < max_iter; ++iter) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v)
            if (g.degree(v) == 0) dangling += rank[v];
        const double base = (1.0 - damping) / n + damping * dangling / n;
        for (NodeId v = 0; v < n; ++v) {
            double in = 0.0;
            for (NodeId u : g.neighbors(v)) in += rank[u] / g.degree(u);
            next[v] = base + damping * in;
        }
        double delta = 0.0;
        for (NodeId v = 0; v < n; ++v) delta += std::abs(next[v] - rank[v]);
        rank.swap(next);
        result.iterations = iter + 1;
        if (delta < tol) {
            result.converged = true;
            break;
        }
    }
    result.scores.values = std::move(rank);
    return result;
}

/// Community-diversity ranking on its own, registered under the method name
/// "CSR-CD". Stands in for the community-based spreader-ranking baseline,
/// of which only the diversity component is defined here.
inline ScoreTable cd_rank(const Graph& g, const Partition& p) {
    ScoreTable table = community_diversity(g, p);
    table.method = "CSR-CD";
    return table;
}

}  // namespace seedrank
