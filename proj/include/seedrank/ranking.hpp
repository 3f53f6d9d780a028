#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "seedrank/baselines.hpp"
#include "seedrank/graph.hpp"
#include "seedrank/leiden.hpp"
#include "seedrank/scores.hpp"

namespace seedrank {

/// The ranking strategies under comparison.
enum class Method { kMcd, kCsrCd, kPageRank, kHIndex, kDegree };

inline constexpr Method kAllMethods[] = {Method::kMcd, Method::kCsrCd, Method::kPageRank,
                                         Method::kHIndex, Method::kDegree};

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::kMcd: return "MCD";
        case Method::kCsrCd: return "CSR-CD";
        case Method::kPageRank: return "PR";
        case Method::kHIndex: return "HI";
        case Method::kDegree: return "DEG";
    }
    throw std::logic_error("unknown method");
}

inline std::optional<Method> parse_method(std::string_view name) {
    for (Method m : kAllMethods)
        if (method_name(m) == name) return m;
    return std::nullopt;
}

inline bool needs_partition(Method m) {
    return m == Method::kMcd || m == Method::kCsrCd;
}

/// Scores a graph with the given method, reusing a precomputed partition for
/// the community-based methods. `partition` may be null for the others.
inline ScoreTable rank_nodes(Method m, const Graph& g, const Partition* partition) {
    switch (m) {
        case Method::kMcd: {
            if (!partition) throw std::invalid_argument("MCD requires a partition");
            ScoreTable cd = community_diversity(g, *partition);
            ScoreTable ecd = extended_community_diversity(g, cd);
            return modified_community_diversity(cd, ecd);
        }
        case Method::kCsrCd:
            if (!partition) throw std::invalid_argument("CSR-CD requires a partition");
            return cd_rank(g, *partition);
        case Method::kPageRank: {
            PageRankResult pr = pagerank_rank(g);
            if (!pr.converged)
                throw std::runtime_error("pagerank failed to converge after " +
                                         std::to_string(pr.iterations) + " iterations");
            return std::move(pr.scores);
        }
        case Method::kHIndex: return h_index_rank(g);
        case Method::kDegree: return degree_rank(g);
    }
    throw std::logic_error("unknown method");
}

/// Full ranking pipeline from scratch; for community-based methods this
/// includes the Leiden run, so timing it measures the whole cost of the
/// strategy.
inline ScoreTable rank_nodes(Method m, const Graph& g, const QualityConfig& cfg) {
    if (needs_partition(m)) {
        Partition p = leiden(g, cfg);
        return rank_nodes(m, g, &p);
    }
    return rank_nodes(m, g, nullptr);
}

}  // namespace seedrank
