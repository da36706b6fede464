#include "episafe/safe_polytope.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "episafe/errors.hpp"
#include "episafe/parallel.hpp"

namespace episafe {

double SafetyConstraint::residual(const IsingModel& model) const {
    double lhs = 0.0;
    for (auto [e, c] : edge_coeffs) lhs += c * model.coupling(e);
    for (auto [v, c] : node_coeffs) lhs += c * model.field(v);
    return lhs - rhs;
}

SafetyConstraint two_mode_constraint(const Graph& graph, const SeedSet& seeds) {
    validate_seeds(graph, seeds);
    SafetyConstraint c;
    c.origin = seeds;
    c.rhs = 0.0;
    for (int v = 0; v < graph.node_count(); ++v)
        if (!seeds.contains(v)) c.node_coeffs.emplace_back(v, 1.0);
    for (int e = 0; e < graph.edge_count(); ++e) {
        const Edge& edge = graph.edges()[e];
        if (seeds.contains(edge.u) != seeds.contains(edge.v)) c.edge_coeffs.emplace_back(e, 1.0);
    }
    return c;
}

std::vector<SafetyConstraint> build_two_mode_polytope(const Graph& graph, const SeedCatalog& catalog) {
    if (catalog.size() == 0) throw std::invalid_argument("catalog must be non-empty");
    std::vector<SafetyConstraint> out;
    out.reserve(catalog.size());
    for (const SeedSet& seeds : catalog.seed_sets) out.push_back(two_mode_constraint(graph, seeds));
    return out;
}

SafetyReport is_k_safe_exact(const IsingModel& model, const SeedCatalog& catalog, int k, int workers) {
    if (catalog.size() == 0) throw std::invalid_argument("catalog must be non-empty");
    if (k < catalog.max_seed_size())
        throw std::invalid_argument("k must be at least the largest seed-set size in the catalog");

    SafetyReport report;
    report.per_seed.resize(catalog.size());

    const SpinState all_plus = SpinState::all(model.node_count(), 1);
    const double energy_all_plus = energy(model, all_plus);

    parallel_for(catalog.size(), resolve_workers(workers), [&](long i) {
        const SeedSet& seeds = catalog.seed_sets[i];
        MapResult map = map_mincut(model, seeds);

        SpinState polarized = SpinState::all(model.node_count(), -1);
        for (int v : seeds.nodes) polarized.spins[v] = 1;

        SeedSafety& entry = report.per_seed[i];
        entry.seeds = seeds;
        entry.infected_count = map.state.positive_count();
        entry.map_class = classify_map(map, seeds);
        entry.two_mode_margin = energy_all_plus - energy(model, polarized);
    });

    report.safe = true;
    for (const SeedSafety& entry : report.per_seed) {
        if (entry.infected_count > k) report.safe = false;
        if (!report.worst_seed || entry.infected_count > report.worst_infected_count) {
            report.worst_seed = entry.seeds;
            report.worst_infected_count = entry.infected_count;
        }
    }
    return report;
}

namespace {

SpinState state_from_mask(int n, unsigned mask) {
    SpinState s = SpinState::all(n, -1);
    for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) s.spins[v] = 1;
    return s;
}

}  // namespace

std::vector<SafetyConstraint> exact_sp_facets_tiny(const Graph& graph, int k,
                                                   const std::vector<double>& field,
                                                   bool prune_redundant) {
    const int n = graph.node_count();
    if (n > 4) throw capacity_error("exact facet enumeration is limited to 4 nodes");
    if (k < 1 || k > n) throw std::invalid_argument("k must be in 1..node_count");
    if (static_cast<int>(field.size()) != n) throw std::invalid_argument("field size mismatch");

    // For fixed h, requiring E(x^R) <= E(x) for every completion x of the
    // clamp R is linear in J:
    //   sum_e (x_u x_v - x^R_u x^R_v) J_e <= sum_a h_a (x^R_a - x_a).
    std::vector<SafetyConstraint> out;
    for (unsigned seed_mask = 1; seed_mask < (1u << n); ++seed_mask) {
        if (std::popcount(seed_mask) > k) continue;
        const SpinState seeded = state_from_mask(n, seed_mask);
        std::vector<int> seed_nodes;
        for (int v = 0; v < n; ++v)
            if (seed_mask & (1u << v)) seed_nodes.push_back(v);

        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if ((mask & seed_mask) != seed_mask || mask == seed_mask) continue;
            const SpinState competitor = state_from_mask(n, mask);

            SafetyConstraint c;
            c.origin = SeedSet(seed_nodes);
            for (int e = 0; e < graph.edge_count(); ++e) {
                const Edge& edge = graph.edges()[e];
                const double coeff =
                    static_cast<double>(competitor.spins[edge.u] * competitor.spins[edge.v] -
                                        seeded.spins[edge.u] * seeded.spins[edge.v]);
                if (coeff != 0.0) c.edge_coeffs.emplace_back(e, coeff);
            }
            double rhs = 0.0;
            for (int v = 0; v < n; ++v)
                rhs += field[v] * (seeded.spins[v] - competitor.spins[v]);
            c.rhs = rhs;
            out.push_back(std::move(c));
        }
    }

    if (prune_redundant) {
        // Drop constraints that can never bind (no J dependence, slack rhs)
        // and exact duplicates keeping the tightest rhs.
        std::map<std::vector<std::pair<int, double>>, size_t> tightest;
        std::vector<SafetyConstraint> kept;
        for (SafetyConstraint& c : out) {
            if (c.edge_coeffs.empty()) {
                if (c.rhs < 0.0) kept.push_back(std::move(c));  // infeasible for every J: keep visible
                continue;
            }
            auto it = tightest.find(c.edge_coeffs);
            if (it == tightest.end()) {
                tightest.emplace(c.edge_coeffs, kept.size());
                kept.push_back(std::move(c));
            } else if (c.rhs < kept[it->second].rhs) {
                kept[it->second] = std::move(c);
            }
        }
        out = std::move(kept);
    }
    return out;
}

bool satisfies_all(const std::vector<SafetyConstraint>& constraints, const IsingModel& model,
                   double tol) {
    for (const SafetyConstraint& c : constraints)
        if (c.residual(model) > tol) return false;
    return true;
}

}  // namespace episafe
