#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "seedrank/detail/util.hpp"
#include "seedrank/graph.hpp"

namespace seedrank {

/// Disjoint cover of the node set: every node carries exactly one community
/// id, ids are dense in [0, community_count), and no community is empty.
struct Partition {
    std::vector<std::uint32_t> assignment;  // node index -> community id
    std::uint32_t community_count = 0;

    static Partition singletons(NodeId n) {
        Partition p;
        p.assignment.resize(n);
        for (NodeId v = 0; v < n; ++v) p.assignment[v] = v;
        p.community_count = n;
        return p;
    }

    std::uint32_t community_of(NodeId v) const { return assignment[v]; }

    /// Members of each community, node indices ascending.
    std::vector<std::vector<NodeId>> groups() const {
        std::vector<std::vector<NodeId>> out(community_count);
        for (NodeId v = 0; v < assignment.size(); ++v) out[assignment[v]].push_back(v);
        return out;
    }

    std::uint64_t fingerprint() const {
        std::uint64_t h = detail::fnv1a_u64(community_count, 0x84222325CBF29CE4ull);
        for (auto c : assignment) h = detail::fnv1a_u64(c, h);
        return h;
    }
};

/// Checks the Partition invariants against a graph; throws on violation.
inline void validate_partition(const Graph& g, const Partition& p) {
    if (p.assignment.size() != g.node_count())
        throw std::invalid_argument("partition size does not match graph");
    std::vector<std::size_t> population(p.community_count, 0);
    for (auto c : p.assignment) {
        if (c >= p.community_count) throw std::invalid_argument("community id out of range");
        ++population[c];
    }
    for (std::size_t c = 0; c < population.size(); ++c)
        if (population[c] == 0)
            throw std::invalid_argument("empty community id " + std::to_string(c));
}

/// CSV serialization: header plus one `node_label,community_id` row per node.
inline void write_partition_csv(std::ostream& out, const Partition& p,
                                const NodeLabelMap* labels = nullptr) {
    out << "node_label,community_id\n";
    for (NodeId v = 0; v < p.assignment.size(); ++v) {
        if (labels)
            out << labels->label(v);
        else
            out << v;
        out << ',' << p.assignment[v] << '\n';
    }
}

}  // namespace seedrank
