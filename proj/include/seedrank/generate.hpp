#pragma once

#include <stdexcept>
#include <vector>

#include "seedrank/graph.hpp"
#include "seedrank/rng.hpp"

namespace seedrank {

/// Barabasi-Albert preferential attachment graph.
///
/// Bootstrap convention: the first `edges_per_node` nodes start isolated and
/// the next node attaches to all of them; every later node attaches
/// `edges_per_node` edges to distinct existing nodes sampled proportionally
/// to degree. The result is connected with exactly
/// edges_per_node * (n - edges_per_node) edges.
inline Graph generate_ba(NodeId n, NodeId edges_per_node, std::uint64_t rng_seed) {
    if (edges_per_node < 1) throw std::invalid_argument("edges_per_node must be >= 1");
    if (n <= edges_per_node) throw std::invalid_argument("node count must exceed edges_per_node");

    rng::Engine eng(rng::mix(rng_seed, 0xBA));
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(edges_per_node) * (n - edges_per_node));

    // Degree-weighted urn: each node appears once per incident edge.
    std::vector<NodeId> urn;
    urn.reserve(2 * edges.capacity());

    std::vector<NodeId> targets(edges_per_node);
    for (NodeId t = 0; t < edges_per_node; ++t) targets[t] = t;

    for (NodeId v = edges_per_node; v < n; ++v) {
        if (v > edges_per_node) {
            std::size_t picked = 0;
            while (picked < edges_per_node) {
                NodeId candidate = urn[eng.next_below(urn.size())];
                bool fresh = true;
                for (std::size_t i = 0; i < picked; ++i)
                    if (targets[i] == candidate) { fresh = false; break; }
                if (fresh) targets[picked++] = candidate;
            }
        }
        for (NodeId t = 0; t < edges_per_node; ++t) {
            edges.emplace_back(targets[t], v);
            urn.push_back(targets[t]);
            urn.push_back(v);
        }
    }

    return Graph::from_edges(n, std::move(edges));
}

}  // namespace seedrank
