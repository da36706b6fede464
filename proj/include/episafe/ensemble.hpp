#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "episafe/graph.hpp"
#include "episafe/model.hpp"
#include "episafe/rng.hpp"

namespace episafe {

enum class GraphFamily { Gnm, Regular };

/// Whether the 500-sample batch at one sweep point redraws the graph every
/// sample or fixes one graph and resamples only the parameters.
enum class RedrawMode { PerSample, FixedPerPoint };

struct EnsembleSpec {
    GraphFamily family = GraphFamily::Gnm;
    int nodes = 20;
    int samples = 500;
    double j_max = 2.0;  // couplings drawn U(0, j_max)
    bool uniform_field = false;
    double h0 = -1.0;    // constant field when uniform_field is false
    double h_min = -2.0;
    double h_max = 0.0;
    int explicit_seed = -1;  // < 0 means a single uniformly random seed node
    uint64_t rng_seed = 1;
    RedrawMode redraw = RedrawMode::PerSample;
    int workers = 0;
};

struct EnsemblePoint {
    int parameter = 0;  // edge count M for gnm, degree d for regular
    double mixed_fraction = 0.0;
    double safe_fraction = 0.0;
    double infected_fraction = 0.0;
    int samples = 0;
};

struct EnsembleResult {
    std::vector<EnsemblePoint> points;
    uint64_t rng_seed = 0;
    std::string redraw_mode;
};

/// Uniformly random simple graph with exactly m edges.
Graph gen_gnm(int n, int m, CounterRng& rng);

/// Random d-regular simple graph via the pairing model, restarting on
/// self-loops or duplicate pairs. Requires n*d even and 0 <= d < n.
Graph gen_regular(int n, int d, CounterRng& rng);

/// MAP-class fractions across a sweep of the family parameter. Every sample
/// draws from a substream derived from (rng_seed, point, sample), so results
/// are identical for any worker count.
EnsembleResult run_mixed_fraction(const EnsembleSpec& spec, const std::vector<int>& sweep);

/// Triangle-graph scan: for every grid point (J01, J02, J12) in [lo, hi]^3,
/// records the MAP label under the given seed clamp and whether the point
/// lies in the 1-safe region, judged two ways: by the two-mode inequalities
/// over all singleton seeds and by the exact facet list.
struct GeometryCell {
    double j01 = 0.0, j02 = 0.0, j12 = 0.0;
    std::string label;          // MAP spin string, e.g. "+--"
    bool in_two_mode = false;
    bool in_exact = false;
};

struct GeometryScan {
    std::vector<GeometryCell> cells;     // grid order: j01 outer, j12 inner
    std::vector<std::string> labels;     // distinct labels in first-seen order
    int axis_points = 0;
};

GeometryScan k3_geometry_scan(const std::vector<double>& field, double lo, double hi, double step,
                              const SeedSet& seeds);

}  // namespace episafe
