#pragma once

// Umbrella header: influence-maximization toolkit built around community
// diversity scoring, independent-cascade simulation, and rank-based method
// comparison.

#include "seedrank/baselines.hpp"
#include "seedrank/cascade.hpp"
#include "seedrank/experiment.hpp"
#include "seedrank/generate.hpp"
#include "seedrank/graph.hpp"
#include "seedrank/leiden.hpp"
#include "seedrank/metrics.hpp"
#include "seedrank/partition.hpp"
#include "seedrank/ranking.hpp"
#include "seedrank/rng.hpp"
#include "seedrank/scores.hpp"
#include "seedrank/stats.hpp"
