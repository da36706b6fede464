#include "episafe/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "episafe/map_inference.hpp"
#include "episafe/parallel.hpp"
#include "episafe/safe_polytope.hpp"

namespace episafe {

Graph gen_gnm(int n, int m, CounterRng& rng) {
    if (n <= 0) throw std::invalid_argument("node count must be positive");
    const long max_edges = static_cast<long>(n) * (n - 1) / 2;
    if (m < 0 || m > max_edges)
        throw std::invalid_argument("edge count out of range for a simple graph");
    std::vector<Edge> pairs;
    pairs.reserve(max_edges);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
    // Partial Fisher-Yates: the first m slots become a uniform m-subset.
    for (int i = 0; i < m; ++i) {
        const size_t j = i + static_cast<size_t>(rng.uniform_int(pairs.size() - i));
        std::swap(pairs[i], pairs[j]);
    }
    pairs.resize(m);
    return Graph(n, std::move(pairs));
}

Graph gen_regular(int n, int d, CounterRng& rng) {
    if (n <= 0) throw std::invalid_argument("node count must be positive");
    if (d < 0 || d >= n) throw std::invalid_argument("degree out of range");
    if ((static_cast<long>(n) * d) % 2 != 0)
        throw std::invalid_argument("n*d must be even for a d-regular graph");

    std::vector<int> stubs;
    stubs.reserve(static_cast<size_t>(n) * d);
    const int max_restarts = 20000;
    for (int attempt = 0; attempt < max_restarts; ++attempt) {
        stubs.clear();
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < d; ++i) stubs.push_back(v);
        rng.shuffle(stubs);
        std::vector<Edge> edges;
        edges.reserve(stubs.size() / 2);
        bool ok = true;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v) { ok = false; break; }
            if (u > v) std::swap(u, v);
            edges.push_back({u, v});
        }
        if (!ok) continue;
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
        return Graph(n, std::move(edges));
    }
    throw std::runtime_error("pairing model failed to produce a simple graph");
}

namespace {

struct SampleOutcome {
    MapClass cls = MapClass::PolarizedSafe;
};

IsingModel draw_model(const EnsembleSpec& spec, const Graph& g, CounterRng& rng) {
    std::vector<double> J(g.edge_count());
    for (double& j : J) j = rng.uniform(0.0, spec.j_max);
    std::vector<double> h(g.node_count());
    if (spec.uniform_field)
        for (double& f : h) f = rng.uniform(spec.h_min, spec.h_max);
    else
        std::fill(h.begin(), h.end(), spec.h0);
    return IsingModel(g, std::move(J), std::move(h));
}

}  // namespace

EnsembleResult run_mixed_fraction(const EnsembleSpec& spec, const std::vector<int>& sweep) {
    if (spec.nodes <= 0 || spec.samples <= 0)
        throw std::invalid_argument("nodes and samples must be positive");
    if (!(spec.j_max > 0.0)) throw std::invalid_argument("j_max must be positive");
    if (spec.explicit_seed >= spec.nodes)
        throw std::invalid_argument("explicit seed out of range");

    const CounterRng root(spec.rng_seed);
    const CounterRng graph_root = root.derive(1);
    const CounterRng sample_root = root.derive(2);
    const int workers = resolve_workers(spec.workers);

    EnsembleResult result;
    result.rng_seed = spec.rng_seed;
    result.redraw_mode = spec.redraw == RedrawMode::PerSample ? "per_sample" : "fixed_per_point";

    for (size_t pi = 0; pi < sweep.size(); ++pi) {
        const int param = sweep[pi];

        // One shared graph per point when the mode asks for it.
        std::vector<Graph> fixed;
        if (spec.redraw == RedrawMode::FixedPerPoint) {
            CounterRng gr = graph_root.derive(pi);
            fixed.push_back(spec.family == GraphFamily::Gnm ? gen_gnm(spec.nodes, param, gr)
                                                            : gen_regular(spec.nodes, param, gr));
        }

        std::vector<SampleOutcome> outcomes(spec.samples);
        parallel_for(spec.samples, workers, [&](long si) {
            CounterRng rng = sample_root.derive(pi, static_cast<uint64_t>(si));
            const Graph* g = nullptr;
            Graph drawn(1, {});
            if (spec.redraw == RedrawMode::PerSample) {
                drawn = spec.family == GraphFamily::Gnm ? gen_gnm(spec.nodes, param, rng)
                                                        : gen_regular(spec.nodes, param, rng);
                g = &drawn;
            } else {
                g = &fixed.front();
            }
            IsingModel model = draw_model(spec, *g, rng);
            const int seed_node = spec.explicit_seed >= 0
                                      ? spec.explicit_seed
                                      : static_cast<int>(rng.uniform_int(spec.nodes));
            const SeedSet seeds({seed_node});
            const MapResult map = map_mincut(model, seeds);
            outcomes[si].cls = classify_map(map, seeds);
        });

        EnsemblePoint point;
        point.parameter = param;
        point.samples = spec.samples;
        int mixed = 0, safe = 0, infected = 0;
        for (const SampleOutcome& o : outcomes) {
            switch (o.cls) {
                case MapClass::Mixed: ++mixed; break;
                case MapClass::PolarizedSafe: ++safe; break;
                case MapClass::PolarizedInfected: ++infected; break;
            }
        }
        point.mixed_fraction = static_cast<double>(mixed) / spec.samples;
        point.safe_fraction = static_cast<double>(safe) / spec.samples;
        point.infected_fraction = static_cast<double>(infected) / spec.samples;
        result.points.push_back(point);
    }
    return result;
}

GeometryScan k3_geometry_scan(const std::vector<double>& field, double lo, double hi, double step,
                              const SeedSet& seeds) {
    if (field.size() != 3) throw std::invalid_argument("triangle scan needs three fields");
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad grid axis");
    const Graph g(3, {{0, 1}, {0, 2}, {1, 2}});
    validate_seeds(g, seeds);
    const int axis = static_cast<int>(std::llround((hi - lo) / step)) + 1;

    const SeedCatalog singletons = enumerate_seed_catalog(g, 1);
    const std::vector<SafetyConstraint> two_mode = build_two_mode_polytope(g, singletons);
    const std::vector<SafetyConstraint> exact = exact_sp_facets_tiny(g, 1, field, true);
    const double tol = 1e-9;

    GeometryScan scan;
    scan.axis_points = axis;
    scan.cells.reserve(static_cast<size_t>(axis) * axis * axis);
    for (int a = 0; a < axis; ++a)
        for (int b = 0; b < axis; ++b)
            for (int c = 0; c < axis; ++c) {
                GeometryCell cell;
                cell.j01 = lo + a * step;
                cell.j02 = lo + b * step;
                cell.j12 = lo + c * step;
                const IsingModel model(g, {cell.j01, cell.j02, cell.j12}, field);
                const MapResult map = map_bruteforce(model, seeds);
                cell.label = map.state.to_string();
                cell.in_two_mode = satisfies_all(two_mode, model, tol);
                cell.in_exact = satisfies_all(exact, model, tol);
                if (std::find(scan.labels.begin(), scan.labels.end(), cell.label) ==
                    scan.labels.end())
                    scan.labels.push_back(cell.label);
                scan.cells.push_back(std::move(cell));
            }
    return scan;
}

}  // namespace episafe
