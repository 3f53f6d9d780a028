#pragma once

// Test-only reference implementations, deliberately written as direct
// transcriptions of the definitions and kept independent of the library
// code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "seedrank/graph.hpp"
#include "seedrank/partition.hpp"
#include "seedrank/rng.hpp"

namespace oracle {

using seedrank::Graph;
using seedrank::NodeId;
using seedrank::Partition;

/// All-pairs shortest hop counts by Floyd-Warshall; -1 for unreachable.
inline std::vector<std::vector<int>> floyd_warshall(const Graph& g) {
    const int n = static_cast<int>(g.node_count());
    const int inf = 1 << 28;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int v = 0; v < n; ++v) d[v][v] = 0;
    for (const auto& [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d[i][j] >= inf) d[i][j] = -1;
    return d;
}

/// Enumerates every set partition of {0..n-1} as a restricted growth string.
inline void for_each_partition(int n, const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
    std::vector<std::uint32_t> a(n, 0);
    std::function<void(int, std::uint32_t)> rec = [&](int i, std::uint32_t max_used) {
        if (i == n) {
            fn(a);
            return;
        }
        for (std::uint32_t c = 0; c <= max_used + 1 && c <= static_cast<std::uint32_t>(i); ++c) {
            a[i] = c;
            rec(i + 1, std::max(max_used, c));
        }
    };
    if (n > 0) rec(0, 0);
}

/// Newman-Girvan modularity evaluated straight from its definition.
inline double modularity_of(const Graph& g, const std::vector<std::uint32_t>& assignment,
                            double resolution = 1.0) {
    const double m = static_cast<double>(g.edge_count());
    if (m == 0.0) return 0.0;
    std::uint32_t comms = 0;
    for (auto c : assignment) comms = std::max(comms, c + 1);
    std::vector<double> internal(comms, 0.0), deg(comms, 0.0);
    for (const auto& [u, v] : g.edges())
        if (assignment[u] == assignment[v]) internal[assignment[u]] += 1.0;
    for (NodeId v = 0; v < g.node_count(); ++v) deg[assignment[v]] += g.degree(v);
    double q = 0.0;
    for (std::uint32_t c = 0; c < comms; ++c)
        q += internal[c] / m - resolution * (deg[c] / (2 * m)) * (deg[c] / (2 * m));
    return q;
}

/// Exhaustive max-modularity partition; practical up to ~10 nodes.
inline std::pair<double, std::vector<std::uint32_t>> best_modularity(const Graph& g) {
    double best_q = -2.0;
    std::vector<std::uint32_t> best;
    for_each_partition(static_cast<int>(g.node_count()), [&](const std::vector<std::uint32_t>& a) {
        double q = modularity_of(g, a);
        if (q > best_q) {
            best_q = q;
            best = a;
        }
    });
    return {best_q, best};
}

/// Community diversity straight from the formula, one node at a time.
inline std::vector<double> community_diversity(const Graph& g, const Partition& p) {
    std::vector<double> cd(g.node_count(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        std::map<std::uint32_t, int> counts;
        for (NodeId u : g.neighbors(v)) counts[p.assignment[u]] += 1;
        int total = 0;
        for (auto& [c, k] : counts) total += k;
        if (total == 0) continue;
        double h = 0.0;
        for (auto& [c, k] : counts) {
            double share = static_cast<double>(k) / total;
            h -= share * std::log(share);
        }
        cd[v] = h;
    }
    return cd;
}

inline std::vector<double> extended_community_diversity(const Graph& g,
                                                        const std::vector<double>& cd) {
    std::vector<double> ecd(g.node_count(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        double sum = cd[v];
        for (NodeId u : g.neighbors(v)) sum += cd[u];
        ecd[v] = sum;
    }
    return ecd;
}

inline std::vector<double> modified_community_diversity(const std::vector<double>& cd,
                                                        const std::vector<double>& ecd) {
    std::vector<double> mcd(cd.size(), 0.0);
    for (std::size_t v = 0; v < cd.size(); ++v) {
        if (cd[v] == 0.0 && ecd[v] == 0.0) continue;  // 0/0 convention
        double p = cd[v] / ecd[v];
        if (p <= 0.0 || p >= 1.0) continue;  // 0 log 0 and 1 log 1 conventions
        mcd[v] = -p * std::log(p);
    }
    return mcd;
}

// --- small graph builders -------------------------------------------------

inline Graph path_graph(NodeId n) {
    std::vector<seedrank::Edge> edges;
    for (NodeId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return Graph::from_edges(n, std::move(edges));
}

inline Graph star_graph(NodeId leaves) {
    std::vector<seedrank::Edge> edges;
    for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    return Graph::from_edges(leaves + 1, std::move(edges));
}

inline Graph clique(NodeId n) {
    std::vector<seedrank::Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, std::move(edges));
}

/// Two 4-cliques {0..3} and {4..7} joined by the single edge 3-4.
inline Graph two_cliques_bridge() {
    std::vector<seedrank::Edge> edges;
    for (NodeId u = 0; u < 4; ++u)
        for (NodeId v = u + 1; v < 4; ++v) edges.emplace_back(u, v);
    for (NodeId u = 4; u < 8; ++u)
        for (NodeId v = u + 1; v < 8; ++v) edges.emplace_back(u, v);
    edges.emplace_back(3, 4);
    return Graph::from_edges(8, std::move(edges));
}

inline Graph disjoint_triangles() {
    return Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

/// Erdos-Renyi-style random simple graph.
inline Graph random_graph(NodeId n, double edge_prob, seedrank::rng::Engine& eng) {
    std::vector<seedrank::Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (eng.next_unit() < edge_prob) edges.emplace_back(u, v);
    return Graph::from_edges(n, std::move(edges));
}

/// Random dense-id partition into at most max_communities parts.
inline Partition random_partition(NodeId n, std::uint32_t max_communities,
                                  seedrank::rng::Engine& eng) {
    Partition p;
    p.assignment.resize(n);
    for (NodeId v = 0; v < n; ++v)
        p.assignment[v] = static_cast<std::uint32_t>(eng.next_below(max_communities));
    std::vector<std::uint32_t> remap(max_communities, UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& c : p.assignment) {
        if (remap[c] == UINT32_MAX) remap[c] = next++;
        c = remap[c];
    }
    p.community_count = next;
    return p;
}

/// Relabels nodes: node v becomes perm[v].
inline Graph permute_graph(const Graph& g, const std::vector<NodeId>& perm) {
    std::vector<seedrank::Edge> edges;
    for (const auto& [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
    return Graph::from_edges(g.node_count(), std::move(edges));
}

}  // namespace oracle
