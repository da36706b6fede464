#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "episafe/graph.hpp"

namespace episafe {

/// +-1 assignment per node. +1 marks a node that ends up infected (removed),
/// -1 a node that stays susceptible.
struct SpinState {
    std::vector<int8_t> spins;

    SpinState() = default;
    explicit SpinState(std::vector<int8_t> s);
    static SpinState all(int node_count, int8_t value);

    int size() const { return static_cast<int>(spins.size()); }
    int positive_count() const;
    std::string to_string() const;  // e.g. "+--"
    bool operator==(const SpinState&) const = default;
};

/// Attractive pairwise binary model: nonnegative edge couplings plus
/// per-node fields over a fixed graph.
///
/// Energy convention used throughout:
///   E(x) = -sum_a h_a x_a - sum_{{a,b} in edges} J_ab x_a x_b
/// so a negative field biases a node toward the susceptible (-1) state and
/// couplings J >= 0 reward aligned neighbors.
class IsingModel {
public:
    IsingModel(Graph graph, std::vector<double> coupling, std::vector<double> field);

    const Graph& graph() const { return graph_; }
    int node_count() const { return graph_.node_count(); }

    /// Coupling for edge index i (parallel to graph().edges()).
    double coupling(int edge_idx) const { return coupling_[edge_idx]; }
    const std::vector<double>& couplings() const { return coupling_; }

    double field(int node) const { return field_[node]; }
    const std::vector<double>& fields() const { return field_; }

    /// Copy with replaced parameter vectors (same graph). Validates again.
    IsingModel with_parameters(std::vector<double> coupling, std::vector<double> field) const;

private:
    Graph graph_;
    std::vector<double> coupling_;
    std::vector<double> field_;
};

/// Non-empty sorted set of initially infected nodes.
struct SeedSet {
    std::vector<int> nodes;  // sorted, unique

    SeedSet() = default;
    explicit SeedSet(std::vector<int> ids);

    int size() const { return static_cast<int>(nodes.size()); }
    bool contains(int v) const;
    std::string to_string() const;  // e.g. "{0,3}"
    bool operator==(const SeedSet&) const = default;
};

/// Ordered list of seed sets indexing safety constraints. Duplicates rejected.
struct SeedCatalog {
    std::vector<SeedSet> seed_sets;

    SeedCatalog() = default;
    explicit SeedCatalog(std::vector<SeedSet> sets);

    int size() const { return static_cast<int>(seed_sets.size()); }
    int max_seed_size() const;
};

double energy(const IsingModel& model, const SpinState& state);

/// Nodes with spin +1.
std::vector<int> infected_set(const SpinState& state);

/// Throws std::invalid_argument when any seed id is outside the graph.
void validate_seeds(const Graph& graph, const SeedSet& seeds);

/// All node subsets of size 1..k_max, ordered by size then lexicographically.
SeedCatalog enumerate_seed_catalog(const Graph& graph, int k_max);

}  // namespace episafe
