#pragma once

#include <cstdint>
#include <vector>

#include "episafe/graph.hpp"
#include "episafe/model.hpp"
#include "episafe/rng.hpp"

namespace episafe {

enum class NodeState : int8_t { Susceptible = 0, Infected = 1, Removed = 2 };

/// Independent cascade dynamics: per-edge transmission probabilities over a
/// fixed contact graph.
struct CascadeModel {
    Graph graph;
    std::vector<double> transmit_prob;  // parallel to graph.edges(), each in [0,1]

    CascadeModel(Graph g, std::vector<double> probs);
};

struct CascadeTrace {
    /// states[t][v] after step t; states[0] is the seeded initial condition.
    std::vector<std::vector<NodeState>> states;
    std::vector<int> removed;  // terminal removed set, sorted
    int steps = 0;             // synchronous steps executed until no infected remain
};

/// Synchronous ICM run: every infected node attempts each susceptible
/// neighbor once with the edge probability, then moves to removed. Attempt
/// draws are consumed in canonical order (infected node ascending, neighbor
/// ascending) and are made for every neighbor regardless of its state, so a
/// trace depends only on the rng stream and the seeds.
CascadeTrace icm_run(const CascadeModel& model, const SeedSet& seeds, CounterRng& rng);

}  // namespace episafe
