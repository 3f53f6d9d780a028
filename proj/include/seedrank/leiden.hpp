#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "seedrank/graph.hpp"
#include "seedrank/partition.hpp"
#include "seedrank/rng.hpp"

namespace seedrank {

enum class QualityMeasure { kModularity, kCpm };

struct QualityConfig {
    QualityMeasure quality = QualityMeasure::kModularity;
    double resolution = 1.0;
    std::uint64_t rng_seed = 0;
    int max_iterations = 100;
};

/// Trace of the flat-partition quality after each three-phase pass,
/// starting from the singleton partition. Non-decreasing by construction.
struct LeidenTrace {
    std::vector<double> pass_quality;
};

namespace detail {

// A pass below stops improving once a full three-phase sweep gains less
// than this much quality.
inline constexpr double kMinQualityGain = 1e-12;
// Randomness scale of the refinement merge sampling.
inline constexpr double kRefineTheta = 1e-2;

inline double quality_on_assignment(const Graph& g, const std::vector<std::uint32_t>& comm,
                                    std::uint32_t id_bound, const QualityConfig& cfg) {
    const double m = static_cast<double>(g.edge_count());
    std::vector<double> internal(id_bound, 0.0);
    std::vector<double> degree_sum(id_bound, 0.0);
    std::vector<double> size(id_bound, 0.0);
    for (const auto& [u, v] : g.edges())
        if (comm[u] == comm[v]) internal[comm[u]] += 1.0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        degree_sum[comm[v]] += g.degree(v);
        size[comm[v]] += 1.0;
    }
    double q = 0.0;
    if (cfg.quality == QualityMeasure::kModularity) {
        if (m == 0.0) return 0.0;
        for (std::uint32_t c = 0; c < id_bound; ++c) {
            double frac = degree_sum[c] / (2.0 * m);
            q += internal[c] / m - cfg.resolution * frac * frac;
        }
    } else {
        for (std::uint32_t c = 0; c < id_bound; ++c)
            q += internal[c] - cfg.resolution * size[c] * (size[c] - 1.0) / 2.0;
    }
    return q;
}

/// Weighted multigraph for one aggregation level. Self-loop weight is kept
/// separately; adjacency holds no self entries and is sorted by neighbor.
struct LevelGraph {
    std::vector<std::size_t> offset{0};
    std::vector<std::pair<NodeId, double>> adj;
    std::vector<double> self_weight;
    std::vector<double> strength;   // weighted degree incl. 2 * self_weight
    std::vector<double> node_size;  // number of original nodes collapsed
    double total_weight = 0.0;      // sum of edge weights, self-loops once

    NodeId n() const { return static_cast<NodeId>(self_weight.size()); }

    static LevelGraph from_graph(const Graph& g) {
        LevelGraph lg;
        const NodeId n = g.node_count();
        lg.offset.resize(n + 1);
        lg.adj.reserve(2 * g.edge_count());
        for (NodeId v = 0; v < n; ++v) {
            lg.offset[v] = lg.adj.size();
            for (NodeId u : g.neighbors(v)) lg.adj.emplace_back(u, 1.0);
        }
        lg.offset[n] = lg.adj.size();
        lg.self_weight.assign(n, 0.0);
        lg.node_size.assign(n, 1.0);
        lg.strength.resize(n);
        for (NodeId v = 0; v < n; ++v) lg.strength[v] = g.degree(v);
        lg.total_weight = static_cast<double>(g.edge_count());
        return lg;
    }

    std::span<const std::pair<NodeId, double>> edges_of(NodeId v) const {
        return {adj.data() + offset[v], adj.data() + offset[v + 1]};
    }
};

struct CommunityState {
    std::vector<double> strength_sum;
    std::vector<double> size_sum;
    std::vector<std::uint32_t> population;
    std::set<std::uint32_t> empty_ids;
    std::uint32_t active = 0;

    void init(const LevelGraph& lg, const std::vector<std::uint32_t>& comm) {
        const NodeId n = lg.n();
        strength_sum.assign(n, 0.0);
        size_sum.assign(n, 0.0);
        population.assign(n, 0);
        empty_ids.clear();
        for (NodeId v = 0; v < n; ++v) {
            strength_sum[comm[v]] += lg.strength[v];
            size_sum[comm[v]] += lg.node_size[v];
            ++population[comm[v]];
        }
        active = 0;
        for (std::uint32_t c = 0; c < n; ++c) {
            if (population[c] > 0)
                ++active;
            else
                empty_ids.insert(c);
        }
    }
};

/// Gain of moving a node with strength `s` and size `z` out of its community
/// (with v's contribution already removed from from_*) into a target.
inline double move_gain(const QualityConfig& cfg, double m, double s, double z,
                        double edge_to_target, double edge_to_from, double target_strength,
                        double from_strength, double target_size, double from_size) {
    if (cfg.quality == QualityMeasure::kModularity)
        return (edge_to_target - edge_to_from) / m -
               cfg.resolution * s * (target_strength - from_strength) / (2.0 * m * m);
    return (edge_to_target - edge_to_from) - cfg.resolution * z * (target_size - from_size);
}

/// Phase 1: queue-driven local moving. Each node moves to the strictly best
/// neighboring (or empty) community; ties keep the current community, else
/// the lowest id wins. Neighbors of a moved node are re-queued.
inline std::size_t move_nodes_fast(const LevelGraph& lg, std::vector<std::uint32_t>& comm,
                                   CommunityState& cs, const QualityConfig& cfg,
                                   rng::Engine& eng) {
    const NodeId n = lg.n();
    const double m = lg.total_weight;
    std::size_t moves = 0;

    std::vector<NodeId> queue(n);
    for (NodeId v = 0; v < n; ++v) queue[v] = v;
    rng::shuffle(queue, eng);
    std::vector<char> queued(n, 1);
    std::size_t head = 0;

    std::vector<double> edge_to(n, 0.0);
    std::vector<std::uint32_t> touched;
    touched.reserve(64);

    while (head < queue.size()) {
        NodeId v = queue[head++];
        queued[v] = 0;
        if (lg.strength[v] == 0.0 && lg.self_weight[v] == 0.0) continue;  // isolated

        const std::uint32_t cur = comm[v];
        touched.clear();
        for (const auto& [u, w] : lg.edges_of(v)) {
            std::uint32_t c = comm[u];
            if (edge_to[c] == 0.0 && w > 0.0) touched.push_back(c);
            edge_to[c] += w;
        }

        const double s = lg.strength[v];
        const double z = lg.node_size[v];
        const double e_cur = edge_to[cur];
        const double from_strength = cs.strength_sum[cur] - s;
        const double from_size = cs.size_sum[cur] - z;

        double best_gain = 0.0;
        std::uint32_t best = cur;
        auto consider = [&](std::uint32_t cand, double e_cand) {
            double gain = move_gain(cfg, m, s, z, e_cand, e_cur, cs.strength_sum[cand],
                                    from_strength, cs.size_sum[cand], from_size);
            if (gain > best_gain || (gain == best_gain && best != cur && cand < best)) {
                best_gain = gain;
                best = cand;
            }
        };
        for (std::uint32_t cand : touched)
            if (cand != cur) consider(cand, edge_to[cand]);
        if (!cs.empty_ids.empty() && cs.population[cur] > 1)
            consider(*cs.empty_ids.begin(), 0.0);

        for (std::uint32_t c : touched) edge_to[c] = 0.0;

        if (best != cur) {
            ++moves;
            cs.strength_sum[cur] -= s;
            cs.size_sum[cur] -= z;
            if (--cs.population[cur] == 0) {
                cs.empty_ids.insert(cur);
                --cs.active;
            }
            if (cs.population[best] == 0) {
                cs.empty_ids.erase(best);
                ++cs.active;
            }
            cs.strength_sum[best] += s;
            cs.size_sum[best] += z;
            ++cs.population[best];
            comm[v] = best;
            for (const auto& [u, w] : lg.edges_of(v)) {
                if (comm[u] != best && !queued[u]) {
                    queue.push_back(u);
                    queued[u] = 1;
                }
            }
        }
    }
    return moves;
}

struct Refinement {
    std::vector<std::uint32_t> dense_id;  // node -> refined community (dense)
    std::uint32_t count = 0;
};

/// Phase 2: split every community into well-connected pieces. Starting from
/// singletons, each node may merge into a community within its own subset,
/// sampled among non-negative-gain candidates with weight exp(gain / theta).
/// Only candidates the node actually has edges to can win, so every refined
/// community induces a connected subgraph.
inline Refinement refine_partition(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                                   const QualityConfig& cfg, rng::Engine& eng) {
    const NodeId n = lg.n();
    const double m = lg.total_weight;
    const bool modularity = cfg.quality == QualityMeasure::kModularity;

    std::vector<std::uint32_t> ref(n);
    std::vector<double> ref_strength(lg.strength);
    std::vector<double> ref_size(lg.node_size);
    std::vector<double> ref_ext(n, 0.0);  // edge weight leaving the piece, within its subset
    std::vector<std::uint32_t> ref_pop(n, 1);
    for (NodeId v = 0; v < n; ++v) ref[v] = v;

    std::vector<std::vector<NodeId>> groups(n);
    for (NodeId v = 0; v < n; ++v) groups[comm[v]].push_back(v);

    std::vector<double> edge_to(n, 0.0);
    std::vector<std::uint32_t> touched;
    struct Candidate {
        std::uint32_t id;
        double gain;
    };
    std::vector<Candidate> candidates;
    std::vector<NodeId> order;

    for (std::uint32_t c = 0; c < n; ++c) {
        const auto& members = groups[c];
        if (members.size() < 2) continue;

        double subset_strength = 0.0, subset_size = 0.0;
        for (NodeId v : members) {
            subset_strength += lg.strength[v];
            subset_size += lg.node_size[v];
        }
        auto well_connected = [&](double ext, double s, double z) {
            if (modularity)
                return ext * 2.0 * m >= cfg.resolution * s * (subset_strength - s);
            return ext >= cfg.resolution * z * (subset_size - z);
        };

        order.clear();
        for (NodeId v : members) {
            double to_subset = 0.0;
            for (const auto& [u, w] : lg.edges_of(v))
                if (comm[u] == c) to_subset += w;
            ref_ext[v] = to_subset;
            if (well_connected(to_subset, lg.strength[v], lg.node_size[v])) order.push_back(v);
        }
        rng::shuffle(order, eng);

        for (NodeId v : order) {
            if (ref_pop[v] != 1 || ref[v] != v) continue;  // no longer a singleton

            touched.clear();
            for (const auto& [u, w] : lg.edges_of(v)) {
                if (comm[u] != c) continue;
                std::uint32_t r = ref[u];
                if (edge_to[r] == 0.0) touched.push_back(r);
                edge_to[r] += w;
            }

            const double s = lg.strength[v];
            const double z = lg.node_size[v];
            candidates.clear();
            candidates.push_back({v, 0.0});  // staying put is always an option
            for (std::uint32_t r : touched) {
                if (r == v) continue;
                if (!well_connected(ref_ext[r], ref_strength[r], ref_size[r])) continue;
                double gain = modularity
                                  ? edge_to[r] / m -
                                        cfg.resolution * s * ref_strength[r] / (2.0 * m * m)
                                  : edge_to[r] - cfg.resolution * z * ref_size[r];
                if (gain >= 0.0) candidates.push_back({r, gain});
            }

            std::uint32_t target = v;
            if (candidates.size() > 1) {
                std::sort(candidates.begin(), candidates.end(),
                          [](const Candidate& a, const Candidate& b) { return a.id < b.id; });
                double max_gain = 0.0;
                for (const auto& cand : candidates) max_gain = std::max(max_gain, cand.gain);
                double total = 0.0;
                for (const auto& cand : candidates)
                    total += std::exp((cand.gain - max_gain) / kRefineTheta);
                double pick = eng.next_unit() * total;
                double cum = 0.0;
                target = candidates.back().id;
                for (const auto& cand : candidates) {
                    cum += std::exp((cand.gain - max_gain) / kRefineTheta);
                    if (pick < cum) {
                        target = cand.id;
                        break;
                    }
                }
            }

            if (target != v) {
                ref[v] = target;
                ++ref_pop[target];
                ref_pop[v] = 0;
                ref_strength[target] += s;
                ref_size[target] += z;
                ref_ext[target] += ref_ext[v] - 2.0 * edge_to[target];
            }
            for (std::uint32_t r : touched) edge_to[r] = 0.0;
        }
    }

    Refinement out;
    out.dense_id.assign(n, 0);
    std::vector<std::uint32_t> remap(n, UINT32_MAX);
    for (NodeId v = 0; v < n; ++v) {
        std::uint32_t root = ref[v];
        if (remap[root] == UINT32_MAX) remap[root] = out.count++;
        out.dense_id[v] = remap[root];
    }
    return out;
}

/// Phase 3: collapse refined communities into aggregate nodes. The induced
/// community assignment groups aggregate nodes by their original community,
/// so the flat partition is unchanged by aggregation.
inline LevelGraph aggregate(const LevelGraph& lg, const Refinement& refinement,
                            const std::vector<std::uint32_t>& comm,
                            std::vector<std::uint32_t>& comm_out) {
    const NodeId n2 = refinement.count;
    LevelGraph out;
    out.self_weight.assign(n2, 0.0);
    out.node_size.assign(n2, 0.0);
    out.strength.assign(n2, 0.0);
    out.total_weight = lg.total_weight;

    for (NodeId v = 0; v < lg.n(); ++v) {
        std::uint32_t r = refinement.dense_id[v];
        out.node_size[r] += lg.node_size[v];
        out.self_weight[r] += lg.self_weight[v];
    }

    struct Entry {
        NodeId a, b;
        double w;
    };
    std::vector<Entry> cross;
    for (NodeId v = 0; v < lg.n(); ++v) {
        std::uint32_t rv = refinement.dense_id[v];
        for (const auto& [u, w] : lg.edges_of(v)) {
            if (u < v) continue;  // each undirected edge once
            std::uint32_t ru = refinement.dense_id[u];
            if (rv == ru)
                out.self_weight[rv] += w;
            else
                cross.push_back({std::min(rv, ru), std::max(rv, ru), w});
        }
    }
    std::sort(cross.begin(), cross.end(), [](const Entry& x, const Entry& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });

    std::vector<std::vector<std::pair<NodeId, double>>> nbr(n2);
    for (std::size_t i = 0; i < cross.size();) {
        std::size_t j = i;
        double w = 0.0;
        while (j < cross.size() && cross[j].a == cross[i].a && cross[j].b == cross[i].b)
            w += cross[j++].w;
        nbr[cross[i].a].emplace_back(cross[i].b, w);
        nbr[cross[i].b].emplace_back(cross[i].a, w);
        i = j;
    }

    out.offset.resize(static_cast<std::size_t>(n2) + 1);
    for (NodeId r = 0; r < n2; ++r) {
        out.offset[r] = out.adj.size();
        auto& row = nbr[r];
        std::sort(row.begin(), row.end());
        for (const auto& e : row) out.adj.push_back(e);
    }
    out.offset[n2] = out.adj.size();
    for (NodeId r = 0; r < n2; ++r) {
        double s = 2.0 * out.self_weight[r];
        for (const auto& [u, w] : out.edges_of(r)) s += w;
        out.strength[r] = s;
    }

    // Induced assignment: all members of a refined community share one
    // original community.
    comm_out.assign(n2, 0);
    std::vector<std::uint32_t> remap(lg.n(), UINT32_MAX);
    std::uint32_t next = 0;
    std::vector<char> seen(n2, 0);
    for (NodeId v = 0; v < lg.n(); ++v) {
        std::uint32_t r = refinement.dense_id[v];
        if (seen[r]) continue;
        seen[r] = 1;
        std::uint32_t c = comm[v];
        if (remap[c] == UINT32_MAX) remap[c] = next++;
        comm_out[r] = remap[c];
    }
    return out;
}

}  // namespace detail

/// Quality of a partition: Newman-Girvan modularity (in [-0.5, 1]) or the
/// constant Potts model objective, both with a resolution parameter. An
/// edgeless graph has modularity 0 by convention.
inline double quality(const Graph& g, const Partition& p, const QualityConfig& cfg = {}) {
    validate_partition(g, p);
    if (cfg.resolution <= 0.0) throw std::invalid_argument("resolution must be positive");
    return detail::quality_on_assignment(g, p.assignment, p.community_count, cfg);
}

/// Leiden community detection: repeated passes of local moving, partition
/// refinement, and graph aggregation until a full pass improves quality by
/// less than 1e-12, every community is a single aggregate node, or
/// cfg.max_iterations passes have run. Deterministic for a fixed seed;
/// every community induces a connected subgraph; isolated nodes end up as
/// singletons.
inline Partition leiden(const Graph& g, const QualityConfig& cfg = {},
                        LeidenTrace* trace = nullptr) {
    if (g.node_count() == 0) throw std::invalid_argument("leiden requires a non-empty graph");
    if (cfg.resolution <= 0.0) throw std::invalid_argument("resolution must be positive");
    if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");

    const NodeId n = g.node_count();
    detail::LevelGraph level = detail::LevelGraph::from_graph(g);
    std::vector<std::uint32_t> comm(n);
    for (NodeId v = 0; v < n; ++v) comm[v] = v;
    std::vector<NodeId> node_to_agg(n);
    for (NodeId v = 0; v < n; ++v) node_to_agg[v] = v;

    rng::Engine eng(rng::mix(cfg.rng_seed, 0x1E1DE27ull));
    std::vector<std::uint32_t> flat(n);
    auto flat_quality = [&]() {
        for (NodeId v = 0; v < n; ++v) flat[v] = comm[node_to_agg[v]];
        return detail::quality_on_assignment(g, flat, static_cast<std::uint32_t>(level.n()), cfg);
    };

    double q_prev = flat_quality();  // singleton partition
    if (trace) trace->pass_quality.assign(1, q_prev);

    detail::CommunityState cs;
    for (int pass = 0; pass < cfg.max_iterations; ++pass) {
        cs.init(level, comm);
        detail::move_nodes_fast(level, comm, cs, cfg, eng);
        double q_now = flat_quality();
        if (trace) trace->pass_quality.push_back(q_now);
        if (cs.active == level.n()) break;  // nothing left to aggregate

        detail::Refinement refinement = detail::refine_partition(level, comm, cfg, eng);
        std::vector<std::uint32_t> comm_next;
        level = detail::aggregate(level, refinement, comm, comm_next);
        comm = std::move(comm_next);
        for (NodeId v = 0; v < n; ++v) node_to_agg[v] = refinement.dense_id[node_to_agg[v]];

        if (q_now - q_prev < detail::kMinQualityGain) break;
        q_prev = q_now;
    }

    Partition result;
    result.assignment.resize(n);
    std::vector<std::uint32_t> remap(level.n(), UINT32_MAX);
    std::uint32_t next_id = 0;
    for (NodeId v = 0; v < n; ++v) {
        std::uint32_t c = comm[node_to_agg[v]];
        if (remap[c] == UINT32_MAX) remap[c] = next_id++;
        result.assignment[v] = remap[c];
    }
    result.community_count = next_id;
    return result;
}

}  // namespace seedrank
