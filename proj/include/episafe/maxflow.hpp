#pragma once

#include <vector>

namespace episafe {

/// Dinic max-flow on a graph with real-valued capacities.
///
/// Supports the two residual-reachability queries needed to pick a canonical
/// minimum cut: the set reachable from the source (the inclusion-minimal
/// source side among all minimum cuts) and the complement of the set that
/// reaches the sink (the inclusion-maximal source side). The two coincide
/// exactly when the minimum cut is unique.
class MaxFlow {
public:
    MaxFlow(int node_count, int source, int sink);

    /// Directed arc u->v with capacity cap; the reverse arc gets rev_cap.
    /// Use rev_cap == cap for an undirected edge.
    void add_edge(int u, int v, double cap, double rev_cap = 0.0);

    /// Runs Dinic to completion, returns the max-flow value.
    double solve();

    /// Nodes reachable from the source in the residual graph. Valid after solve().
    std::vector<char> min_cut_source_side() const;

    /// Nodes that can reach the sink in the residual graph; the complement is
    /// the largest min-cut source side. Valid after solve().
    std::vector<char> residual_reaches_sink() const;

private:
    struct Arc {
        int to;
        int rev;  // index of the reverse arc in head_[to]
        double cap;
    };

    bool bfs_levels();
    double push(int v, double limit);

    int n_, source_, sink_;
    std::vector<std::vector<Arc>> head_;
    std::vector<int> level_;
    std::vector<int> iter_;

    static constexpr double kEps = 1e-12;
};

}  // namespace episafe
