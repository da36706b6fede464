#include "episafe/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "episafe/errors.hpp"
#include "json.hpp"

namespace episafe {

namespace {

using ojson = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// Shortest decimal form that parses back to the same double.
std::string fmt(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

ojson parse_json_text(const std::string& text, const std::string& path) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        long line = 1;
        const size_t stop = std::min<size_t>(e.byte, text.size());
        for (size_t i = 0; i < stop; ++i)
            if (text[i] == '\n') ++line;
        throw parse_error("invalid JSON in " + path, line);
    }
}

double need_number(const ojson& o, const char* field) {
    if (!o.is_object() || !o.contains(field) || !o[field].is_number())
        throw parse_error("expected a numeric field", -1, field);
    return o[field].get<double>();
}

int need_int(const ojson& o, const char* field) {
    if (!o.is_object() || !o.contains(field) || !o[field].is_number_integer())
        throw parse_error("expected an integer field", -1, field);
    return o[field].get<int>();
}

const ojson& need_array(const ojson& o, const char* field) {
    if (!o.is_object() || !o.contains(field) || !o[field].is_array())
        throw parse_error("expected an array field", -1, field);
    return o[field];
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

long long parse_ll(const std::string& raw, long line, const char* field) {
    const std::string s = trim(raw);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw parse_error("expected an integer", line, field);
    return v;
}

IsingModel load_model_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string lineText;
    long lineNo = 0;
    bool header_seen = false;
    std::vector<Edge> edges;
    std::vector<double> couplings;
    int max_id = -1;
    while (std::getline(in, lineText)) {
        ++lineNo;
        const std::string s = trim(lineText);
        if (s.empty()) continue;
        if (!header_seen) {
            if (s != "u,v,J") throw parse_error("expected header u,v,J", lineNo);
            header_seen = true;
            continue;
        }
        const auto fields = split(s, ',');
        if (fields.size() != 3) throw parse_error("expected 3 fields", lineNo);
        const int u = static_cast<int>(parse_ll(fields[0], lineNo, "u"));
        const int v = static_cast<int>(parse_ll(fields[1], lineNo, "v"));
        const std::string js = trim(fields[2]);
        double j = 0.0;
        const auto [ptr, ec] = std::from_chars(js.data(), js.data() + js.size(), j);
        if (ec != std::errc() || ptr != js.data() + js.size())
            throw parse_error("expected a number", lineNo, "J");
        if (u < 0 || v < 0) throw parse_error("node ids must be nonnegative", lineNo);
        edges.push_back({u, v});
        couplings.push_back(j);
        max_id = std::max({max_id, u, v});
    }
    if (!header_seen) throw parse_error("empty edge list", -1);
    // Edge-list convenience input carries no fields; they default to zero.
    Graph g(max_id + 1, edges);
    std::vector<double> ordered_J(g.edge_count());
    for (size_t i = 0; i < edges.size(); ++i)
        ordered_J[g.edge_index(edges[i].u, edges[i].v)] = couplings[i];
    return IsingModel(std::move(g), std::move(ordered_J),
                      std::vector<double>(max_id + 1, 0.0));
}

ojson model_to_json(const IsingModel& model) {
    ojson j;
    j["nodes"] = ojson::array();
    for (int v = 0; v < model.node_count(); ++v)
        j["nodes"].push_back({{"id", v}, {"h", model.field(v)}});
    j["edges"] = ojson::array();
    for (int e = 0; e < model.graph().edge_count(); ++e) {
        const Edge& edge = model.graph().edges()[e];
        j["edges"].push_back({{"u", edge.u}, {"v", edge.v}, {"J", model.coupling(e)}});
    }
    return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

std::string seed_ids(const SeedSet& seeds) {
    std::string out;
    for (size_t i = 0; i < seeds.nodes.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(seeds.nodes[i]);
    }
    return out;
}

std::string dot_model(const IsingModel& model, const IsingModel* baseline,
                      const SpinState* state) {
    double max_j = 0.0;
    for (int e = 0; e < model.graph().edge_count(); ++e)
        max_j = std::max(max_j, model.coupling(e));
    if (baseline)
        for (int e = 0; e < baseline->graph().edge_count(); ++e)
            max_j = std::max(max_j, baseline->coupling(e));
    if (max_j <= 0.0) max_j = 1.0;
    auto width = [&](double j) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", 0.5 + 4.0 * j / max_j);
        return std::string(buf);
    };

    std::string out = "graph episafe {\n  node [shape=circle];\n";
    for (int v = 0; v < model.node_count(); ++v) {
        out += "  " + std::to_string(v) + " [label=\"" + std::to_string(v) +
               "\\nh=" + fmt(model.field(v)) + "\"";
        if (state) {
            const bool infected = state->spins[v] > 0;
            out += infected ? ", style=filled, fillcolor=salmon"
                            : ", style=filled, fillcolor=white";
        }
        out += "];\n";
    }
    for (int e = 0; e < model.graph().edge_count(); ++e) {
        const Edge& edge = model.graph().edges()[e];
        const double j = model.coupling(e);
        out += "  " + std::to_string(edge.u) + " -- " + std::to_string(edge.v) +
               " [penwidth=" + width(j) + ", label=\"J=" + fmt(j) + "\"];\n";
        if (baseline) {
            const double delta = j - baseline->coupling(e);
            if (delta < -1e-12)
                out += "  " + std::to_string(edge.u) + " -- " + std::to_string(edge.v) +
                       " [style=dashed, color=red, label=\"dJ=" + fmt(delta) + "\"];\n";
        }
    }
    out += "}\n";
    return out;
}

const RegionGeometry::Region& region_of(const RegionGeometry& geo, int id) {
    for (const auto& r : geo.regions)
        if (r.id == id) return r;
    throw std::invalid_argument("geometry is missing region " + std::to_string(id));
}

ojson geo_features(const IsingModel& model, const RegionGeometry& geo,
                   const IsingModel* baseline) {
    ojson features = ojson::array();
    for (int v = 0; v < model.node_count(); ++v) {
        const auto& r = region_of(geo, v);
        ojson props{{"id", v}, {"h", model.field(v)}};
        if (!r.name.empty()) props["name"] = r.name;
        features.push_back({{"type", "Feature"},
                            {"geometry",
                             {{"type", "Point"}, {"coordinates", {r.lon, r.lat}}}},
                            {"properties", props}});
    }
    for (int e = 0; e < model.graph().edge_count(); ++e) {
        const Edge& edge = model.graph().edges()[e];
        const auto& ru = region_of(geo, edge.u);
        const auto& rv = region_of(geo, edge.v);
        ojson props{{"u", edge.u}, {"v", edge.v}, {"J", model.coupling(e)}};
        if (baseline) {
            props["J0"] = baseline->coupling(e);
            props["delta"] = model.coupling(e) - baseline->coupling(e);
        }
        features.push_back(
            {{"type", "Feature"},
             {"geometry",
              {{"type", "LineString"},
               {"coordinates", {{ru.lon, ru.lat}, {rv.lon, rv.lat}}}}},
             {"properties", props}});
    }
    return ojson{{"type", "FeatureCollection"}, {"features", features}};
}

[[noreturn]] void unsupported(const char* what) {
    throw std::invalid_argument(std::string("unsupported export format for ") + what);
}

}  // namespace

IsingModel load_model(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return load_model_csv(path);
    const ojson j = parse_json_text(read_file(path), path);
    if (!j.is_object()) throw parse_error("model file must be a JSON object", -1);
    const ojson& nodes = need_array(j, "nodes");
    const ojson& edges = need_array(j, "edges");
    const int n = static_cast<int>(nodes.size());
    if (n == 0) throw parse_error("model needs at least one node", -1, "nodes");

    std::vector<double> h(n, 0.0);
    std::vector<char> seen(n, 0);
    for (const ojson& node : nodes) {
        const int id = need_int(node, "id");
        if (id < 0 || id >= n) throw parse_error("node ids must be exactly 0..N-1", -1, "id");
        if (seen[id]) throw parse_error("duplicate node id", -1, "id");
        seen[id] = 1;
        h[id] = need_number(node, "h");
    }

    std::vector<Edge> edge_list;
    std::vector<double> raw_J;
    edge_list.reserve(edges.size());
    for (const ojson& edge : edges) {
        edge_list.push_back({need_int(edge, "u"), need_int(edge, "v")});
        raw_J.push_back(need_number(edge, "J"));
    }
    Graph g(n, edge_list);
    std::vector<double> J(g.edge_count());
    for (size_t i = 0; i < edge_list.size(); ++i)
        J[g.edge_index(edge_list[i].u, edge_list[i].v)] = raw_J[i];
    return IsingModel(std::move(g), std::move(J), std::move(h));
}

void save_model(const IsingModel& model, const std::string& path) {
    write_file(path, dump(model_to_json(model)));
}

MobilityTable load_mobility(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string lineText;
    long lineNo = 0;
    bool header_seen = false;
    MobilityTable table;
    int max_id = -1;
    while (std::getline(in, lineText)) {
        ++lineNo;
        const std::string s = trim(lineText);
        if (s.empty()) continue;
        if (!header_seen) {
            if (s != "origin,destination,count")
                throw parse_error("expected header origin,destination,count", lineNo);
            header_seen = true;
            continue;
        }
        const auto fields = split(s, ',');
        if (fields.size() != 3) throw parse_error("expected 3 fields", lineNo);
        MobilityRow row;
        row.origin = static_cast<int>(parse_ll(fields[0], lineNo, "origin"));
        row.destination = static_cast<int>(parse_ll(fields[1], lineNo, "destination"));
        row.count = parse_ll(fields[2], lineNo, "count");
        if (row.origin < 0 || row.destination < 0)
            throw parse_error("region ids must be nonnegative", lineNo);
        if (row.count < 0) throw parse_error("counts must be nonnegative", lineNo, "count");
        max_id = std::max({max_id, row.origin, row.destination});
        table.rows.push_back(row);
    }
    if (!header_seen) throw parse_error("missing mobility header", -1);
    table.regions = max_id + 1;

    std::vector<char> seen(std::max(0, table.regions), 0);
    for (const MobilityRow& r : table.rows) seen[r.origin] = seen[r.destination] = 1;
    for (int i = 0; i < table.regions; ++i)
        if (!seen[i])
            throw parse_error("region ids must be dense 0..N-1; missing " + std::to_string(i),
                              -1);
    return table;
}

SeedCatalog load_catalog(const std::string& path, const Graph& graph) {
    const ojson j = parse_json_text(read_file(path), path);
    const ojson& sets = need_array(j, "seed_sets");
    std::vector<SeedSet> seed_sets;
    for (const ojson& entry : sets) {
        if (!entry.is_array()) throw parse_error("seed sets must be arrays", -1, "seed_sets");
        std::vector<int> ids;
        for (const ojson& id : entry) {
            if (!id.is_number_integer())
                throw parse_error("seed ids must be integers", -1, "seed_sets");
            ids.push_back(id.get<int>());
        }
        SeedSet seeds(std::move(ids));
        validate_seeds(graph, seeds);
        seed_sets.push_back(std::move(seeds));
    }
    return SeedCatalog(std::move(seed_sets));
}

IsingModel build_model_from_mobility(const MobilityTable& table, double scale, double h0) {
    if (table.rows.empty()) throw std::invalid_argument("mobility table has no rows");
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("scale must be positive");
    if (!std::isfinite(h0)) throw std::invalid_argument("h0 must be finite");

    const int n = table.regions;
    std::map<std::pair<int, int>, long long> pair_counts;
    for (const MobilityRow& r : table.rows) {
        if (r.origin == r.destination) continue;  // self-visits carry no pairwise weight
        const auto key = std::minmax(r.origin, r.destination);
        pair_counts[{key.first, key.second}] += r.count;
    }
    long long max_count = 0;
    for (const auto& [pair, count] : pair_counts) max_count = std::max(max_count, count);

    std::vector<Edge> edges;
    std::vector<double> J;
    for (const auto& [pair, count] : pair_counts) {
        if (count == 0) continue;
        edges.push_back({pair.first, pair.second});
        J.push_back(scale * static_cast<double>(count) / static_cast<double>(max_count));
    }
    Graph g(n, edges);
    std::vector<double> ordered_J(g.edge_count());
    for (size_t i = 0; i < edges.size(); ++i)
        ordered_J[g.edge_index(edges[i].u, edges[i].v)] = J[i];
    return IsingModel(std::move(g), std::move(ordered_J), std::vector<double>(n, h0));
}

RegionGeometry load_geometry(const std::string& path) {
    const ojson j = parse_json_text(read_file(path), path);
    const ojson& regions = need_array(j, "regions");
    RegionGeometry geo;
    for (const ojson& r : regions) {
        RegionGeometry::Region region;
        region.id = need_int(r, "id");
        region.lon = need_number(r, "lon");
        region.lat = need_number(r, "lat");
        if (r.contains("name") && r["name"].is_string()) region.name = r["name"];
        geo.regions.push_back(std::move(region));
    }
    std::sort(geo.regions.begin(), geo.regions.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    return geo;
}

ExportFormat parse_format(const std::string& name) {
    if (name == "json") return ExportFormat::Json;
    if (name == "csv") return ExportFormat::Csv;
    if (name == "dot") return ExportFormat::Dot;
    if (name == "geojson") return ExportFormat::GeoJson;
    throw std::invalid_argument("unknown format: " + name);
}

void export_model(const IsingModel& model, const std::string& path, ExportFormat format,
                  const RegionGeometry* geometry) {
    switch (format) {
        case ExportFormat::Json:
            save_model(model, path);
            return;
        case ExportFormat::Csv: {
            std::string out = "u,v,J\n";
            for (int e = 0; e < model.graph().edge_count(); ++e) {
                const Edge& edge = model.graph().edges()[e];
                out += std::to_string(edge.u) + "," + std::to_string(edge.v) + "," +
                       fmt(model.coupling(e)) + "\n";
            }
            write_file(path, out);
            return;
        }
        case ExportFormat::Dot:
            write_file(path, dot_model(model, nullptr, nullptr));
            return;
        case ExportFormat::GeoJson:
            if (!geometry)
                throw std::invalid_argument("geojson export requires region geometry");
            write_file(path, dump(geo_features(model, *geometry, nullptr)));
            return;
    }
    unsupported("model");
}

void export_prediction(const MapResult& map, const SeedSet& seeds, const IsingModel& model,
                       const std::string& path, ExportFormat format) {
    switch (format) {
        case ExportFormat::Json: {
            ojson j;
            j["seeds"] = seeds.nodes;
            j["state"] = map.state.to_string();
            j["energy"] = map.energy;
            j["infected"] = infected_set(map.state);
            j["infected_count"] = map.state.positive_count();
            j["map_class"] = to_string(classify_map(map, seeds));
            j["method"] = to_string(map.method);
            j["tie_broken"] = map.tie_broken;
            write_file(path, dump(j));
            return;
        }
        case ExportFormat::Csv: {
            std::string out = "node,spin,infected\n";
            for (int v = 0; v < map.state.size(); ++v)
                out += std::to_string(v) + "," + (map.state.spins[v] > 0 ? "+1" : "-1") + "," +
                       (map.state.spins[v] > 0 ? "1" : "0") + "\n";
            write_file(path, out);
            return;
        }
        case ExportFormat::Dot:
            write_file(path, dot_model(model, nullptr, &map.state));
            return;
        default:
            unsupported("prediction");
    }
}

void export_prevention(const PreventionSolution& solution, const IsingModel& baseline,
                       const std::string& path, ExportFormat format,
                       const RegionGeometry* geometry) {
    const IsingModel& corrected = solution.corrected;
    switch (format) {
        case ExportFormat::Json: {
            ojson j;
            j["cost"] = solution.cost;
            j["baseline_already_safe"] = solution.baseline_already_safe;
            j["stats"] = {{"method", solution.stats.method},
                          {"iterations", solution.stats.iterations},
                          {"feasibility_residual", solution.stats.feasibility_residual},
                          {"optimality_gap", solution.stats.optimality_gap},
                          {"active_constraints", solution.stats.active_constraints},
                          {"lazy_rounds", solution.stats.lazy_rounds}};
            ojson changes = ojson::array();
            for (int e = 0; e < corrected.graph().edge_count(); ++e) {
                const double delta = corrected.coupling(e) - baseline.coupling(e);
                if (delta == 0.0) continue;
                const Edge& edge = corrected.graph().edges()[e];
                changes.push_back({{"u", edge.u},
                                   {"v", edge.v},
                                   {"J0", baseline.coupling(e)},
                                   {"J", corrected.coupling(e)},
                                   {"delta", delta}});
            }
            for (int v = 0; v < corrected.node_count(); ++v) {
                const double delta = corrected.field(v) - baseline.field(v);
                if (delta == 0.0) continue;
                changes.push_back({{"node", v},
                                   {"h0", baseline.field(v)},
                                   {"h", corrected.field(v)},
                                   {"delta", delta}});
            }
            j["changes"] = changes;
            j["constraint_slack"] = solution.constraint_slack;
            j["corrected"] = model_to_json(corrected);
            write_file(path, dump(j));
            return;
        }
        case ExportFormat::Csv: {
            std::string out = "u,v,J0,J,delta\n";
            for (int e = 0; e < corrected.graph().edge_count(); ++e) {
                const Edge& edge = corrected.graph().edges()[e];
                out += std::to_string(edge.u) + "," + std::to_string(edge.v) + "," +
                       fmt(baseline.coupling(e)) + "," + fmt(corrected.coupling(e)) + "," +
                       fmt(corrected.coupling(e) - baseline.coupling(e)) + "\n";
            }
            write_file(path, out);
            return;
        }
        case ExportFormat::Dot:
            write_file(path, dot_model(corrected, &baseline, nullptr));
            return;
        case ExportFormat::GeoJson:
            if (!geometry)
                throw std::invalid_argument("geojson export requires region geometry");
            write_file(path, dump(geo_features(corrected, *geometry, &baseline)));
            return;
    }
    unsupported("prevention");
}

void export_safety(const SafetyReport& report, const std::string& path, ExportFormat format) {
    switch (format) {
        case ExportFormat::Json: {
            ojson j;
            j["safe"] = report.safe;
            if (report.worst_seed) j["worst_seed"] = report.worst_seed->nodes;
            j["worst_infected_count"] = report.worst_infected_count;
            ojson rows = ojson::array();
            for (const SeedSafety& s : report.per_seed)
                rows.push_back({{"seeds", s.seeds.nodes},
                                {"infected_count", s.infected_count},
                                {"map_class", to_string(s.map_class)},
                                {"two_mode_margin", s.two_mode_margin}});
            j["per_seed"] = rows;
            write_file(path, dump(j));
            return;
        }
        case ExportFormat::Csv: {
            std::string out = "# safe=" + std::string(report.safe ? "1" : "0") +
                              " worst_infected=" + std::to_string(report.worst_infected_count) +
                              "\nseed_set,infected_count,map_class,two_mode_margin\n";
            for (const SeedSafety& s : report.per_seed)
                out += seed_ids(s.seeds) + "," + std::to_string(s.infected_count) + "," +
                       to_string(s.map_class) + "," + fmt(s.two_mode_margin) + "\n";
            write_file(path, out);
            return;
        }
        default:
            unsupported("safety report");
    }
}

void export_ensemble(const EnsembleResult& result, const std::string& path, ExportFormat format) {
    switch (format) {
        case ExportFormat::Json: {
            ojson j;
            j["rng_seed"] = result.rng_seed;
            j["redraw_mode"] = result.redraw_mode;
            ojson rows = ojson::array();
            for (const EnsemblePoint& p : result.points)
                rows.push_back({{"parameter", p.parameter},
                                {"mixed_fraction", p.mixed_fraction},
                                {"safe_fraction", p.safe_fraction},
                                {"infected_fraction", p.infected_fraction},
                                {"samples", p.samples}});
            j["points"] = rows;
            write_file(path, dump(j));
            return;
        }
        case ExportFormat::Csv: {
            std::string out = "# rng_seed=" + std::to_string(result.rng_seed) +
                              " redraw=" + result.redraw_mode + "\n" +
                              "parameter,mixed_fraction,safe_fraction,infected_fraction,samples\n";
            for (const EnsemblePoint& p : result.points)
                out += std::to_string(p.parameter) + "," + fmt(p.mixed_fraction) + "," +
                       fmt(p.safe_fraction) + "," + fmt(p.infected_fraction) + "," +
                       std::to_string(p.samples) + "\n";
            write_file(path, out);
            return;
        }
        default:
            unsupported("ensemble result");
    }
}

void export_geometry_scan(const GeometryScan& scan, const std::string& path,
                          ExportFormat format) {
    switch (format) {
        case ExportFormat::Json: {
            ojson j;
            j["axis_points"] = scan.axis_points;
            j["labels"] = scan.labels;
            ojson rows = ojson::array();
            for (const GeometryCell& c : scan.cells)
                rows.push_back({{"j01", c.j01},
                                {"j02", c.j02},
                                {"j12", c.j12},
                                {"label", c.label},
                                {"in_two_mode", c.in_two_mode},
                                {"in_exact", c.in_exact}});
            j["cells"] = rows;
            write_file(path, dump(j));
            return;
        }
        case ExportFormat::Csv: {
            std::string out = "j01,j02,j12,label,in_two_mode,in_exact\n";
            for (const GeometryCell& c : scan.cells)
                out += fmt(c.j01) + "," + fmt(c.j02) + "," + fmt(c.j12) + "," + c.label + "," +
                       (c.in_two_mode ? "1" : "0") + "," + (c.in_exact ? "1" : "0") + "\n";
            write_file(path, out);
            return;
        }
        default:
            unsupported("geometry scan");
    }
}

void export_trace(const CascadeTrace& trace, const std::string& path, ExportFormat format) {
    auto letter = [](NodeState s) {
        switch (s) {
            case NodeState::Susceptible: return "S";
            case NodeState::Infected: return "I";
            default: return "R";
        }
    };
    switch (format) {
        case ExportFormat::Json: {
            ojson j;
            j["steps"] = trace.steps;
            j["removed"] = trace.removed;
            ojson states = ojson::array();
            for (const auto& snapshot : trace.states) {
                ojson row = ojson::array();
                for (NodeState s : snapshot) row.push_back(letter(s));
                states.push_back(row);
            }
            j["states"] = states;
            write_file(path, dump(j));
            return;
        }
        case ExportFormat::Csv: {
            std::string out = "step,node,state\n";
            for (size_t t = 0; t < trace.states.size(); ++t)
                for (size_t v = 0; v < trace.states[t].size(); ++v)
                    out += std::to_string(t) + "," + std::to_string(v) + "," +
                           letter(trace.states[t][v]) + "\n";
            write_file(path, out);
            return;
        }
        default:
            unsupported("cascade trace");
    }
}

void export_constraints(const std::vector<SafetyConstraint>& constraints,
                        const std::string& path) {
    std::string out = "seed_set,coefficients,rhs\n";
    for (const SafetyConstraint& c : constraints) {
        out += seed_ids(c.origin) + ",";
        std::string terms;
        for (auto [e, coeff] : c.edge_coeffs) {
            if (!terms.empty()) terms += ';';
            terms += "e" + std::to_string(e) + ":" + fmt(coeff);
        }
        for (auto [v, coeff] : c.node_coeffs) {
            if (!terms.empty()) terms += ';';
            terms += "n" + std::to_string(v) + ":" + fmt(coeff);
        }
        out += terms + "," + fmt(c.rhs) + "\n";
    }
    write_file(path, out);
}

}  // namespace episafe
