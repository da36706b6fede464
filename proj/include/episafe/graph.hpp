#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace episafe {

/// Undirected edge with canonical orientation u < v.
struct Edge {
    int u;
    int v;
    bool operator==(const Edge&) const = default;
};

/// Simple undirected graph over nodes 0..node_count-1.
///
/// Edges are canonicalized (smaller endpoint first) and stored sorted.
/// Self-loops and duplicate edges are hard construction errors, never
/// silently merged. Immutable after construction.
class Graph {
public:
    Graph(int node_count, std::vector<Edge> edges);

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Neighbors of v paired with the index of the connecting edge.
    const std::vector<std::pair<int, int>>& incident(int v) const { return adjacency_[v]; }

    /// Index into edges() for {u, v}, or -1 when the edge is absent.
    int edge_index(int u, int v) const;

    bool has_edge(int u, int v) const { return edge_index(u, v) >= 0; }

private:
    static uint64_t edge_key(int u, int v) {
        if (u > v) std::swap(u, v);
        return (static_cast<uint64_t>(u) << 32) | static_cast<uint32_t>(v);
    }

    int node_count_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adjacency_;
    std::unordered_map<uint64_t, int> edge_lookup_;
};

}  // namespace episafe
