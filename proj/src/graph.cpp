#include "episafe/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace episafe {

Graph::Graph(int node_count, std::vector<Edge> edges) : node_count_(node_count) {
    if (node_count <= 0) throw std::invalid_argument("graph needs a positive node count");

    for (Edge& e : edges) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= node_count)
            throw std::invalid_argument("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                        "} out of range for " + std::to_string(node_count) + " nodes");
        if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (size_t i = 1; i < edges.size(); ++i) {
        if (edges[i] == edges[i - 1])
            throw std::invalid_argument("duplicate edge {" + std::to_string(edges[i].u) + "," +
                                        std::to_string(edges[i].v) + "}");
    }
    edges_ = std::move(edges);

    adjacency_.resize(node_count_);
    edge_lookup_.reserve(edges_.size() * 2);
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
        const Edge& e = edges_[i];
        adjacency_[e.u].emplace_back(e.v, i);
        adjacency_[e.v].emplace_back(e.u, i);
        edge_lookup_.emplace(edge_key(e.u, e.v), i);
    }
}

int Graph::edge_index(int u, int v) const {
    if (u < 0 || v < 0 || u >= node_count_ || v >= node_count_ || u == v) return -1;
    auto it = edge_lookup_.find(edge_key(u, v));
    return it == edge_lookup_.end() ? -1 : it->second;
}

}  // namespace episafe
