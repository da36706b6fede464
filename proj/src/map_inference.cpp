#include "episafe/map_inference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "episafe/errors.hpp"
#include "episafe/maxflow.hpp"

namespace episafe {

const char* to_string(MapClass c) {
    switch (c) {
        case MapClass::PolarizedSafe: return "polarized-safe";
        case MapClass::PolarizedInfected: return "polarized-infected";
        case MapClass::Mixed: return "mixed";
    }
    return "?";
}

const char* to_string(MapMethod m) {
    return m == MapMethod::BruteForce ? "brute-force" : "min-cut";
}

namespace {

// Canonical order on states of equal energy: fewest +1 first, then
// lexicographic with -1 < +1.
bool state_precedes(const SpinState& a, const SpinState& b) {
    int pa = a.positive_count(), pb = b.positive_count();
    if (pa != pb) return pa < pb;
    return a.spins < b.spins;
}

}  // namespace

MapResult map_bruteforce(const IsingModel& model, const SeedSet& seeds, int max_free) {
    const Graph& g = model.graph();
    validate_seeds(g, seeds);
    const int n = g.node_count();

    std::vector<int> free_nodes;
    for (int v = 0; v < n; ++v)
        if (!seeds.contains(v)) free_nodes.push_back(v);
    const int f = static_cast<int>(free_nodes.size());
    if (f > max_free)
        throw capacity_error("brute-force MAP over " + std::to_string(f) +
                             " free nodes exceeds the cap of " + std::to_string(max_free) +
                             "; use map_mincut");

    // Gray-code walk over completions with incremental energy updates.
    SpinState cur = SpinState::all(n, -1);
    for (int v : seeds.nodes) cur.spins[v] = 1;
    double cur_energy = energy(model, cur);

    SpinState best = cur;
    double best_energy = cur_energy;
    bool tie = false;

    const uint64_t total = uint64_t{1} << f;
    for (uint64_t step = 1; step < total; ++step) {
        const int v = free_nodes[std::countr_zero(step)];
        // Flipping v: delta = 2 h_v x_v + 2 x_v * sum_u J_uv x_u (values before flip).
        double local = model.field(v);
        for (auto [u, e] : g.incident(v)) local += model.coupling(e) * cur.spins[u];
        cur_energy += 2.0 * cur.spins[v] * local;
        cur.spins[v] = static_cast<int8_t>(-cur.spins[v]);

        if (cur_energy < best_energy) {
            best_energy = cur_energy;
            best = cur;
            tie = false;
        } else if (cur_energy == best_energy) {
            tie = true;
            if (state_precedes(cur, best)) best = cur;
        }
    }

    return MapResult{best, energy(model, best), MapMethod::BruteForce, tie};
}

MapResult map_mincut(const IsingModel& model, const SeedSet& seeds) {
    const Graph& g = model.graph();
    validate_seeds(g, seeds);
    const int n = g.node_count();

    std::vector<int> free_index(n, -1);
    std::vector<int> free_nodes;
    for (int v = 0; v < n; ++v) {
        if (!seeds.contains(v)) {
            free_index[v] = static_cast<int>(free_nodes.size());
            free_nodes.push_back(v);
        }
    }
    const int f = static_cast<int>(free_nodes.size());

    SpinState state = SpinState::all(n, 1);
    bool tie = false;

    if (f > 0) {
        // Network nodes: 0..f-1 free spins, f = source (+1 side), f+1 = sink (-1 side).
        const int source = f, sink = f + 1;
        MaxFlow flow(f + 2, source, sink);

        std::vector<double> to_source(f, 0.0), to_sink(f, 0.0);
        for (int i = 0; i < f; ++i) {
            const int v = free_nodes[i];
            const double h = model.field(v);
            if (h > 0.0)
                to_source[i] += 2.0 * h;
            else if (h < 0.0)
                to_sink[i] += -2.0 * h;
            // Seed neighbors are clamped to +1; their couplings act as a pull
            // toward the source.
            for (auto [u, e] : g.incident(v))
                if (seeds.contains(u)) to_source[i] += 2.0 * model.coupling(e);
        }
        for (int i = 0; i < f; ++i) {
            if (to_source[i] > 0.0) flow.add_edge(source, i, to_source[i]);
            if (to_sink[i] > 0.0) flow.add_edge(i, sink, to_sink[i]);
        }
        for (int e = 0; e < g.edge_count(); ++e) {
            const Edge& edge = g.edges()[e];
            const int iu = free_index[edge.u], iv = free_index[edge.v];
            if (iu >= 0 && iv >= 0 && model.coupling(e) > 0.0)
                flow.add_edge(iu, iv, 2.0 * model.coupling(e), 2.0 * model.coupling(e));
        }

        flow.solve();
        const std::vector<char> source_side = flow.min_cut_source_side();
        const std::vector<char> reaches_sink = flow.residual_reaches_sink();
        for (int i = 0; i < f; ++i) {
            state.spins[free_nodes[i]] = source_side[i] ? int8_t{1} : int8_t{-1};
            // A node in neither the minimal source side nor the sink side can
            // sit on either side of some minimum cut.
            if (!source_side[i] && !reaches_sink[i]) tie = true;
        }
    }

    return MapResult{state, energy(model, state), MapMethod::MinCut, tie};
}

MapClass classify_map(const MapResult& result, const SeedSet& seeds) {
    const std::vector<int> infected = infected_set(result.state);
    if (infected == seeds.nodes) return MapClass::PolarizedSafe;
    if (static_cast<int>(infected.size()) == result.state.size()) return MapClass::PolarizedInfected;
    return MapClass::Mixed;
}

}  // namespace episafe
