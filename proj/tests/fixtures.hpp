#pragma once

// Shared test fixtures: a hand-evaluated 6-node bridge graph and
// deterministic community-structured benchmark networks used where the real
// published datasets would sit (those are external inputs; see README).

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include "seedrank/generate.hpp"
#include "seedrank/graph.hpp"
#include "seedrank/partition.hpp"
#include "seedrank/rng.hpp"

namespace fixtures {

using seedrank::Edge;
using seedrank::Graph;
using seedrank::NodeId;
using seedrank::Partition;

/// Two bridge nodes x=0, y=1 joined to each other; x also sees a=2 (comm 0)
/// and b=3 (comm 1), y sees c=4 (comm 0) and d=5 (comm 1). Communities:
/// {x,a,c} = 0, {y,b,d} = 1.
///
/// Hand evaluation (natural log):
///   CD(x) = CD(y) = -(1/3)ln(1/3) - (2/3)ln(2/3) = 0.63651416829481278
///   CD(a..d) = 0 (single-community neighborhoods)
///   ECD(x) = ECD(y) = 2 * CD(x)   = 1.27302833658962556
///   ECD(a) = ECD(b) = CD(x), ECD(c) = ECD(d) = CD(y)
///   P(x) = P(y) = 1/2, MCD(x) = MCD(y) = (ln 2)/2 = 0.34657359027997264
///   leaves: P = 0 so MCD = 0
struct BridgeFixture {
    Graph graph = Graph::from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}});
    Partition partition;

    BridgeFixture() {
        partition.assignment = {0, 1, 0, 1, 0, 1};
        partition.community_count = 2;
    }

    static constexpr double kCd = 0.63651416829481278;
    static constexpr double kEcd = 1.27302833658962556;
    static constexpr double kMcd = 0.34657359027997264;
};

/// Deterministic benchmark network with planted communities: heavy-tailed
/// intra-community degrees (preferential attachment per block), the top hub
/// of every block joined pairwise (a rich club), plus degree-biased extra
/// cross-block edges.
inline Graph community_network(NodeId n, std::uint32_t blocks, NodeId intra_attach,
                               std::size_t extra_inter_edges, std::uint64_t seed) {
    std::vector<NodeId> block_of(n);
    std::vector<std::vector<NodeId>> members(blocks);
    for (NodeId v = 0; v < n; ++v) {
        NodeId b = static_cast<NodeId>((static_cast<std::uint64_t>(v) * blocks) / n);
        block_of[v] = b;
        members[b].push_back(v);
    }

    std::vector<Edge> edges;
    for (std::uint32_t b = 0; b < blocks; ++b) {
        Graph local = seedrank::generate_ba(static_cast<NodeId>(members[b].size()), intra_attach,
                                            seedrank::rng::mix(seed, b));
        for (const auto& [u, v] : local.edges())
            edges.emplace_back(members[b][u], members[b][v]);
    }

    std::vector<NodeId> degree(n, 0);
    for (const auto& [u, v] : edges) {
        ++degree[u];
        ++degree[v];
    }

    auto hub_of = [&](std::uint32_t b) {
        NodeId best = members[b][0];
        for (NodeId v : members[b])
            if (degree[v] > degree[best]) best = v;
        return best;
    };
    for (std::uint32_t a = 0; a < blocks; ++a)
        for (std::uint32_t b = a + 1; b < blocks; ++b)
            edges.emplace_back(hub_of(a), hub_of(b));

    seedrank::rng::Engine eng(seedrank::rng::mix(seed, 0xB10C));
    std::vector<NodeId> urn;
    for (NodeId v = 0; v < n; ++v)
        for (NodeId i = 0; i <= degree[v]; ++i) urn.push_back(v);
    std::size_t added = 0;
    std::vector<Edge> have(edges);
    for (auto& [u, v] : have)
        if (u > v) std::swap(u, v);
    std::sort(have.begin(), have.end());
    while (added < extra_inter_edges) {
        NodeId u = urn[eng.next_below(urn.size())];
        NodeId v = urn[eng.next_below(urn.size())];
        if (u == v || block_of[u] == block_of[v]) continue;
        Edge e{std::min(u, v), std::max(u, v)};
        if (std::binary_search(have.begin(), have.end(), e)) continue;
        have.insert(std::lower_bound(have.begin(), have.end(), e), e);
        edges.push_back(e);
        ++added;
    }
    return Graph::from_edges(n, std::move(edges));
}

/// 62 nodes / 159 edges / 5 planted blocks: a stand-in at the scale of the
/// published dolphin social network, used when no real edge list is present.
inline Graph dolphins_scale_network() { return community_network(62, 5, 2, 45, 7); }

/// 198 nodes / 2742 edges / 4 planted blocks: a stand-in at the scale of the
/// published jazz collaboration network.
inline Graph jazz_scale_network() { return community_network(198, 4, 12, 936, 11); }

/// Looks for a real edge-list file (e.g. the published dolphin network) in
/// the conventional data locations; tests upgrade themselves to the real
/// dataset when present.
inline std::optional<std::filesystem::path> find_dataset(const std::string& filename) {
    namespace fs = std::filesystem;
    std::vector<fs::path> candidates;
    if (const char* env = std::getenv("SEEDRANK_DATA_DIR")) candidates.emplace_back(env);
    candidates.emplace_back("data");
    candidates.emplace_back("../data");
    candidates.emplace_back("../../data");
    candidates.emplace_back("../../../data");
    for (const auto& dir : candidates) {
        fs::path p = dir / filename;
        if (fs::exists(p)) return p;
    }
    return std::nullopt;
}

}  // namespace fixtures
