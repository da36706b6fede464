#pragma once

#include <string>
#include <vector>

#include "episafe/cascade.hpp"
#include "episafe/ensemble.hpp"
#include "episafe/map_inference.hpp"
#include "episafe/model.hpp"
#include "episafe/projection.hpp"
#include "episafe/safe_polytope.hpp"

namespace episafe {

/// Canonical model file: {"nodes":[{"id":int,"h":real}],
/// "edges":[{"u":int,"v":int,"J":real}]}. Node ids must be exactly 0..N-1.
IsingModel load_model(const std::string& path);
void save_model(const IsingModel& model, const std::string& path);

/// Aggregated region-to-region visit counts.
/// CSV with header `origin,destination,count`; ids dense 0..N-1.
struct MobilityRow {
    int origin = 0;
    int destination = 0;
    long long count = 0;
};

struct MobilityTable {
    int regions = 0;
    std::vector<MobilityRow> rows;
};

MobilityTable load_mobility(const std::string& path);

/// Explicit seed catalog file: {"seed_sets":[[int,...],...]}.
SeedCatalog load_catalog(const std::string& path, const Graph& graph);

/// Coupling proxy from travel counts: J_ab = scale * (count_ab + count_ba) /
/// max_pair_count, so weights are symmetrized and normalized into [0, scale].
/// Zero-count pairs (and origin==destination rows) produce no edge; fields
/// are the uniform h0. This linear proxy is a stated stand-in, not an
/// epidemiological calibration.
IsingModel build_model_from_mobility(const MobilityTable& table, double scale, double h0);

/// Optional region coordinates for map export:
/// {"regions":[{"id":int,"name":string,"lon":real,"lat":real}]}.
struct RegionGeometry {
    struct Region {
        int id = 0;
        std::string name;
        double lon = 0.0;
        double lat = 0.0;
    };
    std::vector<Region> regions;  // sorted by id, dense 0..N-1 not required
};

RegionGeometry load_geometry(const std::string& path);

enum class ExportFormat { Json, Csv, Dot, GeoJson };

/// Accepts "json", "csv", "dot", "geojson".
ExportFormat parse_format(const std::string& name);

void export_model(const IsingModel& model, const std::string& path, ExportFormat format,
                  const RegionGeometry* geometry = nullptr);

void export_prediction(const MapResult& map, const SeedSet& seeds, const IsingModel& model,
                       const std::string& path, ExportFormat format);

/// DOT output renders corrected couplings with widths proportional to J and
/// adds a dashed, labeled layer for every reduced edge (J - J0 < 0).
void export_prevention(const PreventionSolution& solution, const IsingModel& baseline,
                       const std::string& path, ExportFormat format,
                       const RegionGeometry* geometry = nullptr);

void export_safety(const SafetyReport& report, const std::string& path, ExportFormat format);

void export_ensemble(const EnsembleResult& result, const std::string& path, ExportFormat format);

void export_geometry_scan(const GeometryScan& scan, const std::string& path, ExportFormat format);

void export_trace(const CascadeTrace& trace, const std::string& path, ExportFormat format);

/// One row per constraint: seed-set ids (semicolon-joined), sparse coefficient
/// terms `e<idx>:<coeff>` / `n<idx>:<coeff>` (semicolon-joined), rhs.
void export_constraints(const std::vector<SafetyConstraint>& constraints,
                        const std::string& path);

}  // namespace episafe
