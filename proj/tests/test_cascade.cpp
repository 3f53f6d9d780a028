#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "oracles.hpp"
#include "seedrank/cascade.hpp"

using namespace seedrank;
using Catch::Matchers::WithinAbs;

namespace {

SeedSet seeds_of(std::vector<NodeId> nodes) {
    SeedSet s;
    s.nodes = std::move(nodes);
    s.spreader_fraction = 0.0;
    return s;
}

/// Reverse-order reimplementation of one cascade round loop, sharing the
/// per-arc coins with simulate_once; used to show the infected set does not
/// depend on processing order.
std::vector<NodeId> simulate_reversed(const Graph& g, std::vector<NodeId> frontier, double p,
                                      std::uint64_t run_key) {
    std::vector<char> infected(g.node_count(), 0);
    for (NodeId s : frontier) infected[s] = 1;
    std::sort(frontier.rbegin(), frontier.rend());
    std::vector<NodeId> all(frontier);
    while (!frontier.empty()) {
        std::vector<NodeId> next;
        for (NodeId u : frontier) {  // descending
            auto nbrs = g.neighbors(u);
            for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) {  // descending
                NodeId v = *it;
                if (infected[v]) continue;
                if (seedrank::detail::arc_coin(run_key, u, v, p)) {
                    infected[v] = 1;
                    next.push_back(v);
                }
            }
        }
        std::sort(next.rbegin(), next.rend());
        all.insert(all.end(), next.begin(), next.end());
        frontier.swap(next);
    }
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

TEST_CASE("simulate_once: p=0 infects only the seeds") {
    Graph g = oracle::path_graph(5);
    auto infected = simulate_once(g, std::vector<NodeId>{2, 4}, 0.0, 99);
    REQUIRE(infected == std::vector<NodeId>{2, 4});
}

TEST_CASE("simulate_once: p=1 infects the seeds' components") {
    Graph g = Graph::from_edges(6, {{0, 1}, {1, 2}, {3, 4}});
    auto infected = simulate_once(g, std::vector<NodeId>{0}, 1.0, 5);
    REQUIRE(infected == std::vector<NodeId>{0, 1, 2});
    auto both = simulate_once(g, std::vector<NodeId>{0, 5}, 1.0, 5);
    REQUIRE(both == std::vector<NodeId>{0, 1, 2, 5});
}

TEST_CASE("simulate_once: argument checks") {
    Graph g = oracle::path_graph(3);
    REQUIRE_THROWS_AS(simulate_once(g, std::vector<NodeId>{}, 0.5, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(simulate_once(g, std::vector<NodeId>{7}, 0.5, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(simulate_once(g, std::vector<NodeId>{0}, 1.5, 1), std::invalid_argument);
}

TEST_CASE("path a-b-c from the middle: exact outcome distribution") {
    Graph g = oracle::path_graph(3);
    // two independent coins: P(1)=0.81, P(2)=0.18, P(3)=0.01
    CascadeConfig cfg;
    cfg.activation_probability = 0.1;
    cfg.runs = 100000;
    cfg.rng_seed = 31337;
    CascadeOutcome outcome = estimate_spread(g, seeds_of({1}), cfg);

    std::array<int, 4> histogram{};
    for (auto c : outcome.per_run_infected) {
        REQUIRE(c >= 1);
        REQUIRE(c <= 3);
        ++histogram[c];
    }
    const double n = cfg.runs;
    REQUIRE_THAT(histogram[1] / n, WithinAbs(0.81, 0.005));
    REQUIRE_THAT(histogram[2] / n, WithinAbs(0.18, 0.005));
    REQUIRE_THAT(histogram[3] / n, WithinAbs(0.01, 0.002));

    // mean within 3 standard errors of the exact expectation 1.2
    REQUIRE_THAT(outcome.mean_infected, WithinAbs(1.2, 3.0 * outcome.std_error));
    REQUIRE_THAT(outcome.mean_infected, WithinAbs(1.2, 0.01));
}

TEST_CASE("estimate_spread: p=0 scale is |seeds|/n and runs replay exactly") {
    rng::Engine eng(8);
    Graph g = oracle::random_graph(20, 0.2, eng);
    CascadeConfig cfg;
    cfg.activation_probability = 0.0;
    cfg.runs = 50;
    cfg.rng_seed = 4;
    CascadeOutcome a = estimate_spread(g, seeds_of({1, 2, 3}), cfg);
    REQUIRE(a.mean_infected == 3.0);
    REQUIRE_THAT(a.mean_final_infected_scale, WithinAbs(3.0 / 20.0, 1e-15));
    REQUIRE(a.std_error == 0.0);

    cfg.activation_probability = 0.3;
    CascadeOutcome b = estimate_spread(g, seeds_of({1, 2, 3}), cfg);
    CascadeOutcome c = estimate_spread(g, seeds_of({1, 2, 3}), cfg);
    REQUIRE(b.per_run_infected == c.per_run_infected);

    cfg.runs = 0;
    REQUIRE_THROWS_AS(estimate_spread(g, seeds_of({1}), cfg), std::invalid_argument);
}

TEST_CASE("exact_spread: closed forms") {
    Graph edge = Graph::from_edges(2, {{0, 1}});
    REQUIRE_THAT(exact_spread(edge, std::vector<NodeId>{0}, 0.3), WithinAbs(1.3, 1e-12));

    Graph tri = oracle::clique(3);
    REQUIRE_THAT(exact_spread(tri, std::vector<NodeId>{0}, 1.0), WithinAbs(3.0, 1e-12));

    Graph path = oracle::path_graph(3);
    REQUIRE_THAT(exact_spread(path, std::vector<NodeId>{0}, 0.1), WithinAbs(1.11, 1e-12));
    // middle seed: 1 + 0.1 + 0.1
    REQUIRE_THAT(exact_spread(path, std::vector<NodeId>{1}, 0.1), WithinAbs(1.2, 1e-12));

    rng::Engine eng(2);
    Graph big = oracle::random_graph(10, 0.6, eng);
    REQUIRE(big.edge_count() > 20);
    REQUIRE_THROWS_AS(exact_spread(big, std::vector<NodeId>{0}, 0.5), std::invalid_argument);
}

TEST_CASE("exact_spread: monotone in seeds and in p") {
    rng::Engine eng(21);
    for (int trial = 0; trial < 6; ++trial) {
        Graph g = oracle::random_graph(8, 0.3, eng);
        if (g.edge_count() > 20 || g.edge_count() == 0) continue;
        double prev = 0.0;
        for (double p : {0.0, 0.1, 0.3, 0.5, 0.8, 1.0}) {
            double value = exact_spread(g, std::vector<NodeId>{0}, p);
            REQUIRE(value >= prev - 1e-12);
            prev = value;
        }
        std::vector<NodeId> seeds{0};
        double base = exact_spread(g, seeds, 0.3);
        for (NodeId extra = 1; extra < 8; ++extra) {
            seeds.push_back(extra);
            double grown = exact_spread(g, seeds, 0.3);
            REQUIRE(grown >= base - 1e-12);
            base = grown;
        }
    }
}

TEST_CASE("Monte Carlo estimate agrees with live-edge enumeration") {
    rng::Engine eng(77);
    int tested = 0;
    for (int trial = 0; tested < 10 && trial < 60; ++trial) {
        NodeId n = 4 + static_cast<NodeId>(eng.next_below(5));
        Graph g = oracle::random_graph(n, 0.35, eng);
        if (g.edge_count() == 0 || g.edge_count() > 12) continue;
        ++tested;

        const double p_grid[] = {0.1, 0.2, 0.3, 0.5, 0.7};
        double p = p_grid[tested % 5];
        std::vector<NodeId> seeds{0};
        if (n > 4 && tested % 2 == 0) seeds.push_back(3);

        double exact = exact_spread(g, seeds, p);
        CascadeConfig cfg;
        cfg.activation_probability = p;
        cfg.runs = 100000;
        cfg.rng_seed = 1000 + tested;
        CascadeOutcome est = estimate_spread(g, seeds_of(seeds), cfg);
        double tolerance = std::max(4.0 * est.std_error, 1e-9);
        REQUIRE_THAT(est.mean_infected, WithinAbs(exact, tolerance));
    }
    REQUIRE(tested == 10);
}

TEST_CASE("round-order independence with fixed per-arc coins") {
    rng::Engine eng(13);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = oracle::random_graph(15, 0.25, eng);
        std::uint64_t run_key = eng.next();
        auto forward = simulate_once(g, std::vector<NodeId>{0, 7}, 0.35, run_key);
        auto backward = simulate_reversed(g, {0, 7}, 0.35, run_key);
        REQUIRE(forward == backward);
    }
}

TEST_CASE("cascade outcome CSV row") {
    Graph g = oracle::path_graph(3);
    CascadeConfig cfg;
    cfg.activation_probability = 0.0;
    cfg.runs = 10;
    CascadeOutcome outcome = estimate_spread(g, seeds_of({1}), cfg);
    std::ostringstream out;
    write_outcome_csv_header(out);
    write_outcome_csv_row(out, "DEG", "toy", 0.05, 0.0, 10, outcome);
    REQUIRE(out.str() ==
            "method,dataset,fraction,p,runs,mean_infected,scale,std_error\n"
            "DEG,toy,0.05,0,10,1,0.3333333333333333,0\n");
}
