#pragma once

#include <optional>
#include <vector>

#include "episafe/map_inference.hpp"
#include "episafe/model.hpp"

namespace episafe {

/// One linear inequality over the model parameters:
///   sum_e edge_coeffs[e] * J_e + sum_v node_coeffs[v] * h_v <= rhs.
/// Coefficients are stored sparsely as (index, coefficient) pairs; edge
/// indices refer to Graph::edges() order.
struct SafetyConstraint {
    std::vector<std::pair<int, double>> edge_coeffs;
    std::vector<std::pair<int, double>> node_coeffs;
    double rhs = 0.0;
    SeedSet origin;

    /// lhs - rhs; satisfied iff <= 0.
    double residual(const IsingModel& model) const;
};

struct SeedSafety {
    SeedSet seeds;
    int infected_count = 0;
    MapClass map_class = MapClass::PolarizedSafe;
    double two_mode_margin = 0.0;  // E(all +1) - E(only seeds +1); positive inside
};

/// Outcome of checking a model against every seed set in a catalog.
struct SafetyReport {
    bool safe = false;
    std::optional<SeedSet> worst_seed;
    int worst_infected_count = 0;
    std::vector<SeedSafety> per_seed;  // ordered like the catalog
};

/// Inequality separating the two polarized outcomes for one seed pattern:
/// the all-infected state must not have lower energy than the only-seeds
/// state, which reduces to
///   sum_{b not in seeds} h_b + sum_{edges cut by seeds} J_ab <= 0.
SafetyConstraint two_mode_constraint(const Graph& graph, const SeedSet& seeds);

/// One two-mode constraint per catalog entry, in catalog order.
std::vector<SafetyConstraint> build_two_mode_polytope(const Graph& graph, const SeedCatalog& catalog);

/// Exact k-safety: solves the MAP for every catalog seed set (min-cut) and
/// requires every infected set to have at most k nodes. Runs seed solves
/// across workers; aggregation is ordered by catalog index.
SafetyReport is_k_safe_exact(const IsingModel& model, const SeedCatalog& catalog, int k, int workers = 0);

/// All facet inequalities of the exact k-safe region in J-space (fields held
/// fixed), obtained by enumerating every clamped pattern R with |R| <= k and
/// every competitor completion. Feasible only for tiny graphs; throws
/// capacity_error for node_count > 4. With prune_redundant, drops exact
/// duplicates and constraints that can never bind.
std::vector<SafetyConstraint> exact_sp_facets_tiny(const Graph& graph, int k,
                                                   const std::vector<double>& field,
                                                   bool prune_redundant = false);

/// Evaluates a J-space constraint list at a coupling vector (fields already
/// folded into rhs). True when every inequality holds within tol.
bool satisfies_all(const std::vector<SafetyConstraint>& constraints, const IsingModel& model,
                   double tol = 0.0);

}  // namespace episafe
