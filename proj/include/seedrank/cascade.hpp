#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "seedrank/detail/util.hpp"
#include "seedrank/graph.hpp"
#include "seedrank/rng.hpp"
#include "seedrank/scores.hpp"

namespace seedrank {

struct CascadeConfig {
    double activation_probability = 0.1;
    int runs = 100;
    std::uint64_t rng_seed = 0;
};

struct CascadeOutcome {
    std::vector<std::uint32_t> per_run_infected;
    double mean_infected = 0.0;
    double mean_final_infected_scale = 0.0;
    double std_error = 0.0;
};

namespace detail {

/// Outcome of the single activation attempt along the directed arc u -> v
/// within one run. A pure function of (run_key, u, v), so the infected set
/// does not depend on the order attempts are processed in, and runs replay
/// bit-for-bit.
inline bool arc_coin(std::uint64_t run_key, NodeId u, NodeId v, double p) {
    return rng::to_unit(rng::mix(rng::mix(run_key, u), v)) < p;
}

}  // namespace detail

/// One independent-cascade realization: every node, on becoming infected,
/// gets exactly one Bernoulli(p) attempt per still-susceptible neighbor,
/// processed in rounds until no new infections. Returns the sorted infected
/// set (always a superset of the seeds).
inline std::vector<NodeId> simulate_once(const Graph& g, std::span<const NodeId> seeds, double p,
                                         std::uint64_t run_key) {
    if (seeds.empty()) throw std::invalid_argument("seed set is empty");
    if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("p must be in [0, 1]");

    std::vector<char> infected(g.node_count(), 0);
    std::vector<NodeId> frontier;
    for (NodeId s : seeds) {
        if (!g.has_node(s)) throw std::invalid_argument("seed out of range");
        if (!infected[s]) {
            infected[s] = 1;
            frontier.push_back(s);
        }
    }
    std::sort(frontier.begin(), frontier.end());

    std::vector<NodeId> all(frontier);
    std::vector<NodeId> next;
    while (!frontier.empty()) {
        next.clear();
        for (NodeId u : frontier) {
            for (NodeId v : g.neighbors(u)) {
                if (infected[v]) continue;  // immunized targets consume no coin
                if (detail::arc_coin(run_key, u, v, p)) {
                    infected[v] = 1;
                    next.push_back(v);
                }
            }
        }
        std::sort(next.begin(), next.end());
        all.insert(all.end(), next.begin(), next.end());
        frontier.swap(next);
    }
    std::sort(all.begin(), all.end());
    return all;
}

/// Monte Carlo spread estimate: cfg.runs independent cascades, run i drawing
/// its coins from the sub-stream mix(rng_seed, i). Deterministic for a fixed
/// config, whatever the execution order.
inline CascadeOutcome estimate_spread(const Graph& g, const SeedSet& seeds,
                                      const CascadeConfig& cfg) {
    if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (seeds.nodes.empty()) throw std::invalid_argument("seed set is empty");

    CascadeOutcome outcome;
    outcome.per_run_infected.resize(cfg.runs);
    for (int i = 0; i < cfg.runs; ++i) {
        auto run = simulate_once(g, seeds.nodes, cfg.activation_probability,
                                 rng::mix(cfg.rng_seed, static_cast<std::uint64_t>(i)));
        outcome.per_run_infected[i] = static_cast<std::uint32_t>(run.size());
    }

    double sum = 0.0;
    for (auto c : outcome.per_run_infected) sum += c;
    outcome.mean_infected = sum / cfg.runs;
    outcome.mean_final_infected_scale =
        g.node_count() > 0 ? outcome.mean_infected / g.node_count() : 0.0;
    if (cfg.runs > 1) {
        double ss = 0.0;
        for (auto c : outcome.per_run_infected) {
            double d = c - outcome.mean_infected;
            ss += d * d;
        }
        outcome.std_error = std::sqrt(ss / (cfg.runs - 1)) / std::sqrt(double(cfg.runs));
    }
    return outcome;
}

/// Exact expected spread by live-edge enumeration: every one of the 2^|E|
/// edge subsets is weighted p^live (1-p)^dead and scored by reachability
/// from the seeds. Refuses graphs with more than 20 edges.
inline double exact_spread(const Graph& g, std::span<const NodeId> seeds, double p) {
    if (g.edge_count() > 20)
        throw std::invalid_argument("exact_spread enumerates 2^|E| subsets; max 20 edges");
    if (seeds.empty()) throw std::invalid_argument("seed set is empty");
    if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("p must be in [0, 1]");

    const auto& edges = g.edges();
    const std::size_t e = edges.size();
    std::vector<double> p_live(e + 1, 1.0), p_dead(e + 1, 1.0);
    for (std::size_t i = 1; i <= e; ++i) {
        p_live[i] = p_live[i - 1] * p;
        p_dead[i] = p_dead[i - 1] * (1.0 - p);
    }

    std::vector<char> seeded(g.node_count(), 0);
    for (NodeId s : seeds) {
        if (!g.has_node(s)) throw std::invalid_argument("seed out of range");
        seeded[s] = 1;
    }

    double expectation = 0.0;
    std::vector<char> reached(g.node_count());
    std::vector<NodeId> stack;
    std::vector<std::vector<NodeId>> live_adj(g.node_count());
    for (std::uint64_t mask = 0; mask < (1ull << e); ++mask) {
        for (auto& l : live_adj) l.clear();
        int live = 0;
        for (std::size_t i = 0; i < e; ++i) {
            if (mask >> i & 1) {
                ++live;
                live_adj[edges[i].first].push_back(edges[i].second);
                live_adj[edges[i].second].push_back(edges[i].first);
            }
        }
        std::fill(reached.begin(), reached.end(), 0);
        stack.clear();
        std::size_t count = 0;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            if (seeded[v]) {
                reached[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : live_adj[u]) {
                if (!reached[v]) {
                    reached[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        expectation += p_live[live] * p_dead[e - live] * static_cast<double>(count);
    }
    return expectation;
}

/// CSV row: method, dataset, fraction, p, runs, mean_infected, scale,
/// std_error.
inline void write_outcome_csv_header(std::ostream& out) {
    out << "method,dataset,fraction,p,runs,mean_infected,scale,std_error\n";
}

inline void write_outcome_csv_row(std::ostream& out, const std::string& method,
                                  const std::string& dataset, double fraction, double p, int runs,
                                  const CascadeOutcome& outcome) {
    out << method << ',' << dataset << ',' << detail::format_double(fraction) << ','
        << detail::format_double(p) << ',' << runs << ','
        << detail::format_double(outcome.mean_infected) << ','
        << detail::format_double(outcome.mean_final_infected_scale) << ','
        << detail::format_double(outcome.std_error) << '\n';
}

}  // namespace seedrank
