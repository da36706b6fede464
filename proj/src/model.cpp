#include "episafe/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace episafe {

SpinState::SpinState(std::vector<int8_t> s) : spins(std::move(s)) {
    for (int8_t v : spins)
        if (v != -1 && v != 1) throw std::invalid_argument("spin values must be -1 or +1");
}

SpinState SpinState::all(int node_count, int8_t value) {
    SpinState s;
    s.spins.assign(node_count, value);
    return s;
}

int SpinState::positive_count() const {
    return static_cast<int>(std::count(spins.begin(), spins.end(), int8_t{1}));
}

std::string SpinState::to_string() const {
    std::string out;
    out.reserve(spins.size());
    for (int8_t v : spins) out.push_back(v > 0 ? '+' : '-');
    return out;
}

IsingModel::IsingModel(Graph graph, std::vector<double> coupling, std::vector<double> field)
    : graph_(std::move(graph)), coupling_(std::move(coupling)), field_(std::move(field)) {
    if (static_cast<int>(coupling_.size()) != graph_.edge_count())
        throw std::invalid_argument("coupling vector must have one entry per edge");
    if (static_cast<int>(field_.size()) != graph_.node_count())
        throw std::invalid_argument("field vector must have one entry per node");
    for (double j : coupling_) {
        if (!std::isfinite(j)) throw std::invalid_argument("coupling must be finite");
        if (j < 0.0) throw std::invalid_argument("coupling must be nonnegative (attractive model)");
    }
    for (double h : field_)
        if (!std::isfinite(h)) throw std::invalid_argument("field must be finite");
}

IsingModel IsingModel::with_parameters(std::vector<double> coupling, std::vector<double> field) const {
    return IsingModel(graph_, std::move(coupling), std::move(field));
}

SeedSet::SeedSet(std::vector<int> ids) : nodes(std::move(ids)) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (nodes.empty()) throw std::invalid_argument("seed set must be non-empty");
    if (nodes.front() < 0) throw std::invalid_argument("seed ids must be nonnegative");
}

bool SeedSet::contains(int v) const {
    return std::binary_search(nodes.begin(), nodes.end(), v);
}

std::string SeedSet::to_string() const {
    std::string out = "{";
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(nodes[i]);
    }
    return out + "}";
}

SeedCatalog::SeedCatalog(std::vector<SeedSet> sets) : seed_sets(std::move(sets)) {
    std::set<std::vector<int>> seen;
    for (const SeedSet& s : seed_sets)
        if (!seen.insert(s.nodes).second)
            throw std::invalid_argument("duplicate seed set " + s.to_string() + " in catalog");
}

int SeedCatalog::max_seed_size() const {
    int m = 0;
    for (const SeedSet& s : seed_sets) m = std::max(m, s.size());
    return m;
}

double energy(const IsingModel& model, const SpinState& state) {
    if (state.size() != model.node_count())
        throw std::invalid_argument("state length does not match model node count");
    double field_term = 0.0;
    for (int a = 0; a < model.node_count(); ++a) field_term += model.field(a) * state.spins[a];
    double pair_term = 0.0;
    const auto& edges = model.graph().edges();
    for (int i = 0; i < static_cast<int>(edges.size()); ++i)
        pair_term += model.coupling(i) * state.spins[edges[i].u] * state.spins[edges[i].v];
    return -field_term - pair_term;
}

std::vector<int> infected_set(const SpinState& state) {
    std::vector<int> out;
    for (int a = 0; a < state.size(); ++a)
        if (state.spins[a] > 0) out.push_back(a);
    return out;
}

void validate_seeds(const Graph& graph, const SeedSet& seeds) {
    if (seeds.nodes.empty()) throw std::invalid_argument("seed set must be non-empty");
    if (seeds.nodes.front() < 0 || seeds.nodes.back() >= graph.node_count())
        throw std::invalid_argument("seed node out of range");
}

SeedCatalog enumerate_seed_catalog(const Graph& graph, int k_max) {
    const int n = graph.node_count();
    if (k_max < 1 || k_max > n)
        throw std::invalid_argument("k_max must be in 1..node_count");

    std::vector<SeedSet> sets;
    std::vector<int> combo;
    for (int k = 1; k <= k_max; ++k) {
        combo.assign(k, 0);
        for (int i = 0; i < k; ++i) combo[i] = i;
        while (true) {
            SeedSet s;
            s.nodes = combo;
            sets.push_back(std::move(s));
            // next k-combination in lexicographic order
            int i = k - 1;
            while (i >= 0 && combo[i] == n - k + i) --i;
            if (i < 0) break;
            ++combo[i];
            for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
        }
    }
    return SeedCatalog(std::move(sets));
}

}  // namespace episafe
