#include "episafe/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace episafe {

CascadeModel::CascadeModel(Graph g, std::vector<double> probs)
    : graph(std::move(g)), transmit_prob(std::move(probs)) {
    if (static_cast<int>(transmit_prob.size()) != graph.edge_count())
        throw std::invalid_argument("one transmission probability per edge required");
    for (double p : transmit_prob)
        if (!std::isfinite(p) || p < 0.0 || p > 1.0)
            throw std::invalid_argument("transmission probabilities must lie in [0, 1]");
}

CascadeTrace icm_run(const CascadeModel& model, const SeedSet& seeds, CounterRng& rng) {
    const Graph& g = model.graph;
    validate_seeds(g, seeds);

    std::vector<NodeState> state(g.node_count(), NodeState::Susceptible);
    std::vector<int> infected = seeds.nodes;  // kept sorted
    for (int v : infected) state[v] = NodeState::Infected;

    CascadeTrace trace;
    trace.states.push_back(state);

    while (!infected.empty()) {
        std::vector<int> next;
        for (int v : infected) {
            std::vector<std::pair<int, int>> ordered = g.incident(v);
            std::sort(ordered.begin(), ordered.end());
            for (auto [w, edge] : ordered) {
                const double u = rng.uniform();
                if (state[w] == NodeState::Susceptible && u < model.transmit_prob[edge]) {
                    state[w] = NodeState::Infected;
                    next.push_back(w);
                }
            }
        }
        for (int v : infected) state[v] = NodeState::Removed;
        std::sort(next.begin(), next.end());
        infected = std::move(next);
        trace.states.push_back(state);
        ++trace.steps;
    }

    for (int v = 0; v < g.node_count(); ++v)
        if (state[v] == NodeState::Removed) trace.removed.push_back(v);
    return trace;
}

}  // namespace episafe
