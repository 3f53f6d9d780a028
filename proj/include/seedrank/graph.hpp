#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seedrank/detail/util.hpp"

namespace seedrank {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;  // canonical: first < second

/// Distance value for nodes a BFS cannot reach.
inline constexpr std::int32_t kUnreachable = -1;

inline constexpr bool is_reachable(std::int32_t distance) { return distance >= 0; }

/// Immutable undirected simple graph over dense node indices [0, node_count).
/// No self-loops, no parallel edges; adjacency lists are sorted. Safe to
/// share across threads once constructed.
class Graph {
public:
    Graph() = default;

    struct CleanupCounts {
        std::size_t duplicate_edges = 0;
        std::size_t self_loops = 0;
    };

    /// Builds a graph from an arbitrary edge list: self-loops are dropped,
    /// duplicates (in either orientation) folded, endpoints canonicalized.
    /// Drop counts are reported through `cleanup` when given.
    static Graph from_edges(NodeId node_count, std::vector<Edge> edges,
                            CleanupCounts* cleanup = nullptr) {
        CleanupCounts counts;
        std::size_t kept = 0;
        for (auto& [u, v] : edges) {
            if (u >= node_count || v >= node_count)
                throw std::invalid_argument("edge endpoint out of range");
            if (u == v) {
                ++counts.self_loops;
                continue;
            }
            if (u > v) std::swap(u, v);
            edges[kept++] = {u, v};
        }
        edges.resize(kept);
        std::sort(edges.begin(), edges.end());
        auto last = std::unique(edges.begin(), edges.end());
        counts.duplicate_edges = static_cast<std::size_t>(edges.end() - last);
        edges.erase(last, edges.end());
        if (cleanup) *cleanup = counts;

        Graph g;
        g.n_ = node_count;
        g.edges_ = std::move(edges);
        g.build_adjacency();
        return g;
    }

    NodeId node_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }

    /// Sorted neighbor list of v.
    std::span<const NodeId> neighbors(NodeId v) const {
        return {adj_.data() + offset_[v], adj_.data() + offset_[v + 1]};
    }

    NodeId degree(NodeId v) const {
        return static_cast<NodeId>(offset_[v + 1] - offset_[v]);
    }

    /// Canonical edge list, sorted, with first < second.
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_node(NodeId v) const { return v < n_; }

    /// Content hash over (n, edge list); used to check that score tables and
    /// partitions refer to the graph they were computed from.
    std::uint64_t fingerprint() const {
        std::uint64_t h = detail::fnv1a_u64(n_, 0xCBF29CE484222325ull);
        for (const auto& [u, v] : edges_) {
            h = detail::fnv1a_u64(u, h);
            h = detail::fnv1a_u64(v, h);
        }
        return h;
    }

private:
    void build_adjacency() {
        offset_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (const auto& [u, v] : edges_) {
            ++offset_[u + 1];
            ++offset_[v + 1];
        }
        for (std::size_t i = 1; i < offset_.size(); ++i) offset_[i] += offset_[i - 1];
        adj_.resize(2 * edges_.size());
        std::vector<std::size_t> cursor(offset_.begin(), offset_.end() - 1);
        for (const auto& [u, v] : edges_) {
            adj_[cursor[u]++] = v;
            adj_[cursor[v]++] = u;
        }
        for (NodeId v = 0; v < n_; ++v)
            std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offset_[v]),
                      adj_.begin() + static_cast<std::ptrdiff_t>(offset_[v + 1]));
    }

    NodeId n_ = 0;
    std::vector<Edge> edges_;
    std::vector<NodeId> adj_;
    std::vector<std::size_t> offset_{0};
};

/// Bijective mapping between external string labels and dense node indices,
/// in first-seen order.
class NodeLabelMap {
public:
    /// Returns the index for `label`, interning it if new.
    NodeId intern(std::string_view label) {
        auto it = index_.find(std::string(label));
        if (it != index_.end()) return it->second;
        NodeId id = static_cast<NodeId>(labels_.size());
        labels_.emplace_back(label);
        index_.emplace(labels_.back(), id);
        return id;
    }

    std::optional<NodeId> find(std::string_view label) const {
        auto it = index_.find(std::string(label));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& label(NodeId id) const { return labels_.at(id); }
    NodeId size() const { return static_cast<NodeId>(labels_.size()); }

    /// Identity map "0".."n-1" for graphs without external labels.
    static NodeLabelMap identity(NodeId n) {
        NodeLabelMap m;
        for (NodeId v = 0; v < n; ++v) m.intern(std::to_string(v));
        return m;
    }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
};

struct LoadOptions {
    /// Accept any run of whitespace or commas as the field separator.
    bool auto_delimiter = true;
    /// Used only when auto_delimiter is false.
    char delimiter = '\t';
    /// Lines starting with any of these characters are skipped.
    std::string comment_prefixes = "#%";
    /// Fold directed inputs into undirected edges. When false, a reverse
    /// duplicate arc ("b a" after "a b") is rejected as an error instead of
    /// being counted as a duplicate.
    bool directed_as_undirected = true;
};

struct LoadReport {
    std::size_t lines_read = 0;        // non-comment, non-blank lines
    std::size_t arcs_parsed = 0;       // raw endpoint pairs before cleanup
    std::size_t duplicate_edges = 0;
    std::size_t self_loops = 0;
    NodeId nodes = 0;                  // post-cleanup
    std::size_t edges = 0;             // post-cleanup
};

/// Reads a whitespace- or comma-separated edge list. Labels are interned in
/// first-seen order; duplicate edges and self-loops are dropped and counted.
/// Empty input yields an empty graph. A line with a token count other than
/// two is a parse error naming the line number.
inline std::pair<Graph, NodeLabelMap> load_edge_list(std::istream& in,
                                                     const LoadOptions& options = {},
                                                     LoadReport* report = nullptr) {
    NodeLabelMap labels;
    std::vector<Edge> arcs;
    LoadReport rep;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (options.comment_prefixes.find(line[first]) != std::string::npos) continue;

        std::vector<std::string_view> tokens;
        std::string_view view(line);
        if (options.auto_delimiter) {
            std::size_t i = 0;
            while (i < view.size()) {
                while (i < view.size() && (view[i] == ' ' || view[i] == '\t' || view[i] == ','))
                    ++i;
                std::size_t start = i;
                while (i < view.size() && view[i] != ' ' && view[i] != '\t' && view[i] != ',')
                    ++i;
                if (i > start) tokens.push_back(view.substr(start, i - start));
            }
        } else {
            for (auto field : detail::split_char(view, options.delimiter))
                if (!field.empty()) tokens.push_back(field);
        }

        if (tokens.size() != 2)
            throw std::runtime_error("edge list parse error at line " +
                                     std::to_string(line_number) + ": expected 2 tokens, got " +
                                     std::to_string(tokens.size()));
        ++rep.lines_read;
        ++rep.arcs_parsed;
        NodeId from = labels.intern(tokens[0]);  // sequenced: first-seen order
        NodeId to = labels.intern(tokens[1]);
        arcs.emplace_back(from, to);
    }

    if (!options.directed_as_undirected) {
        std::vector<Edge> seen(arcs);
        for (auto& [u, v] : seen)
            if (u > v) std::swap(u, v);
        std::sort(seen.begin(), seen.end());
        for (std::size_t i = 0; i + 1 < seen.size(); ++i)
            if (seen[i] == seen[i + 1] && seen[i].first != seen[i].second)
                throw std::runtime_error("duplicate or reverse arc in input declared undirected");
    }

    Graph::CleanupCounts counts;
    Graph g = Graph::from_edges(labels.size(), std::move(arcs), &counts);
    rep.duplicate_edges = counts.duplicate_edges;
    rep.self_loops = counts.self_loops;
    rep.nodes = g.node_count();
    rep.edges = g.edge_count();
    if (report) *report = rep;
    return {std::move(g), std::move(labels)};
}

/// Writes one "u v" line per edge. Internal indices unless a label map is
/// supplied; round-trips through load_edge_list to the same edge set.
inline void save_edge_list(std::ostream& out, const Graph& g,
                           const NodeLabelMap* labels = nullptr) {
    for (const auto& [u, v] : g.edges()) {
        if (labels)
            out << labels->label(u) << ' ' << labels->label(v) << '\n';
        else
            out << u << ' ' << v << '\n';
    }
}

/// Hop distances from `source`; unreachable nodes get kUnreachable.
inline std::vector<std::int32_t> bfs_distances(const Graph& g, NodeId source) {
    if (!g.has_node(source)) throw std::invalid_argument("bfs source out of range");
    std::vector<std::int32_t> dist(g.node_count(), kUnreachable);
    std::queue<NodeId> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : g.neighbors(u)) {
            if (dist[v] == kUnreachable) {
                dist[v] = dist[u] + 1;
                frontier.push(v);
            }
        }
    }
    return dist;
}

}  // namespace seedrank
