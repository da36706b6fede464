#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "episafe/cascade.hpp"
#include "episafe/ensemble.hpp"
#include "episafe/errors.hpp"
#include "episafe/io.hpp"
#include "episafe/map_inference.hpp"
#include "episafe/model.hpp"
#include "episafe/parallel.hpp"
#include "episafe/projection.hpp"
#include "episafe/rng.hpp"
#include "episafe/safe_polytope.hpp"
#include "json.hpp"

namespace {

using namespace episafe;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    size_t start = 0;
    while (start <= csv.size()) {
        const size_t pos = csv.find(',', start);
        const std::string tok = csv.substr(start, pos == std::string::npos ? pos : pos - start);
        if (!tok.empty()) out.push_back(std::stoi(tok));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (out.empty()) throw std::invalid_argument("expected a comma-separated integer list");
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    size_t start = 0;
    while (start <= csv.size()) {
        const size_t pos = csv.find(',', start);
        const std::string tok = csv.substr(start, pos == std::string::npos ? pos : pos - start);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (out.empty()) throw std::invalid_argument("expected a comma-separated number list");
    return out;
}

// "lo:hi:step" inclusive integer sweep.
std::vector<int> parse_sweep(const std::string& spec) {
    const size_t a = spec.find(':'), b = spec.rfind(':');
    if (a == std::string::npos || b == a)
        throw std::invalid_argument("sweep must be lo:hi:step");
    const int lo = std::stoi(spec.substr(0, a));
    const int hi = std::stoi(spec.substr(a + 1, b - a - 1));
    const int step = std::stoi(spec.substr(b + 1));
    if (step <= 0 || hi < lo) throw std::invalid_argument("sweep must be lo:hi:step with step > 0");
    std::vector<int> out;
    for (int v = lo; v <= hi; v += step) out.push_back(v);
    return out;
}

struct GridAxis {
    double lo = 0.0, hi = 2.0, step = 0.05;
};

GridAxis parse_grid(const std::string& spec) {
    const size_t a = spec.find(':'), b = spec.rfind(':');
    if (a == std::string::npos || b == a)
        throw std::invalid_argument("grid must be lo:hi:step");
    GridAxis axis;
    axis.lo = std::stod(spec.substr(0, a));
    axis.hi = std::stod(spec.substr(a + 1, b - a - 1));
    axis.step = std::stod(spec.substr(b + 1));
    if (!(axis.step > 0.0) || axis.hi < axis.lo)
        throw std::invalid_argument("grid must be lo:hi:step with step > 0");
    return axis;
}

/// Resolve where machine-readable output goes: an explicit file, stdout when
/// only a format was requested, or nowhere.
std::string output_target(const std::string& output, bool format_given) {
    if (!output.empty()) return output;
    return format_given ? "/dev/stdout" : "";
}

SeedCatalog resolve_catalog(const Graph& graph, int k, const std::string& catalog_path) {
    if ((k > 0) == !catalog_path.empty())
        throw std::invalid_argument("exactly one of --k and --catalog is required");
    if (k > 0) return enumerate_seed_catalog(graph, k);
    return load_catalog(catalog_path, graph);
}

// ---------------------------------------------------------------------------

struct PredictArgs {
    std::string model_path, seeds_csv, output, format = "json";
    bool format_given = false;
    bool brute = false;
};

int cmd_predict(const PredictArgs& a) {
    const IsingModel model = load_model(a.model_path);
    const SeedSet seeds(parse_int_list(a.seeds_csv));
    validate_seeds(model.graph(), seeds);
    const MapResult map = a.brute ? map_bruteforce(model, seeds) : map_mincut(model, seeds);
    const MapClass cls = classify_map(map, seeds);

    std::fprintf(stderr, "MAP state %s  energy %.17g  infected %d/%d  class %s  method %s%s\n",
                 map.state.to_string().c_str(), map.energy, map.state.positive_count(),
                 model.node_count(), to_string(cls), to_string(map.method),
                 map.tie_broken ? "  (tie)" : "");

    const std::string target = output_target(a.output, a.format_given);
    if (!target.empty())
        export_prediction(map, seeds, model, target, parse_format(a.format));
    return 0;
}

struct SafetyArgs {
    std::string model_path, catalog_path, output, format = "json";
    bool format_given = false;
    int k = 0;
    int workers = 0;
};

int cmd_safety_check(const SafetyArgs& a) {
    const IsingModel model = load_model(a.model_path);
    const SeedCatalog catalog = resolve_catalog(model.graph(), a.k, a.catalog_path);
    const int k = a.k > 0 ? a.k : catalog.max_seed_size();
    const SafetyReport report = is_k_safe_exact(model, catalog, k, a.workers);

    if (report.safe) {
        std::fprintf(stderr, "model is %d-safe across %d seed sets\n", k, catalog.size());
    } else {
        std::fprintf(stderr, "model is NOT %d-safe: seed set %s infects %d nodes\n", k,
                     report.worst_seed ? report.worst_seed->to_string().c_str() : "?",
                     report.worst_infected_count);
    }
    const std::string target = output_target(a.output, a.format_given);
    if (!target.empty()) export_safety(report, target, parse_format(a.format));
    return 0;
}

struct PreventArgs {
    std::string model_path, catalog_path, output, format = "json";
    std::string geometry_path, constraints_out;
    bool format_given = false;
    int k = 0;
    int workers = 0;
    double l1 = 1.0, l2 = 0.0;
    bool adjust_fields = false;
    std::string field_bounds;  // "lo,hi" when fields are adjustable
    double feas_tol = 1e-8, opt_tol = 1e-6;
    long max_iterations = 200000;
};

int cmd_prevent(const PreventArgs& a) {
    const IsingModel baseline = load_model(a.model_path);
    const SeedCatalog catalog = resolve_catalog(baseline.graph(), a.k, a.catalog_path);
    const int k = a.k > 0 ? a.k : catalog.max_seed_size();

    Timer t_build;
    const std::vector<SafetyConstraint> constraints =
        build_two_mode_polytope(baseline.graph(), catalog);
    const double build_s = t_build.seconds();
    if (!a.constraints_out.empty()) export_constraints(constraints, a.constraints_out);

    NormSpec norm;
    norm.l1_weight = a.l1;
    norm.l2_weight = a.l2;
    PreventionProblem problem = make_prevention_problem(baseline, constraints, norm);
    if (a.adjust_fields) {
        const int ne = baseline.graph().edge_count();
        double lo = -1e6, hi = 1e6;
        if (!a.field_bounds.empty()) {
            const auto b = parse_double_list(a.field_bounds);
            if (b.size() != 2) throw std::invalid_argument("--field-bounds expects lo,hi");
            lo = b[0];
            hi = b[1];
        }
        for (int v = 0; v < baseline.node_count(); ++v) {
            problem.adjustable[ne + v] = 1;
            problem.lower[ne + v] = lo;
            problem.upper[ne + v] = hi;
        }
    }
    SolverOptions options;
    options.feasibility_tol = a.feas_tol;
    options.optimality_tol = a.opt_tol;
    options.max_iterations = a.max_iterations;

    Timer t_solve;
    const PreventionSolution solution = project_to_safe(problem, options);
    const double solve_s = t_solve.seconds();

    Timer t_certify;
    const SafetyReport certificate = is_k_safe_exact(solution.corrected, catalog, k, a.workers);
    const double certify_s = t_certify.seconds();

    std::fprintf(stderr,
                 "constraints %d (built %.3fs)  cost %.17g  method %s  rounds %d  "
                 "solve %.3fs  certify %.3fs  %s\n",
                 static_cast<int>(constraints.size()), build_s, solution.cost,
                 solution.stats.method.c_str(), solution.stats.lazy_rounds, solve_s, certify_s,
                 certificate.safe ? "CERTIFIED" : "CERTIFICATION FAILED");
    if (!certificate.safe && certificate.worst_seed)
        std::fprintf(stderr, "certification counterexample: seed set %s infects %d nodes\n",
                     certificate.worst_seed->to_string().c_str(),
                     certificate.worst_infected_count);

    const std::string target = output_target(a.output, a.format_given);
    if (!target.empty()) {
        const RegionGeometry geo =
            a.geometry_path.empty() ? RegionGeometry{} : load_geometry(a.geometry_path);
        export_prevention(solution, baseline, target, parse_format(a.format),
                          a.geometry_path.empty() ? nullptr : &geo);
    }
    return certificate.safe ? 0 : 5;
}

struct EnsembleArgs {
    std::string family = "gnm", sweep, output, format = "csv";
    bool format_given = false;
    int n = 20, samples = 500, seed_node = -1, workers = 0;
    double j_max = 2.0, h0 = -1.0;
    std::string uniform_h;  // "lo,hi" switches the field mode
    std::string redraw = "per_sample";
    uint64_t rng_seed = 1;
};

int cmd_ensemble(const EnsembleArgs& a) {
    EnsembleSpec spec;
    if (a.family == "gnm") spec.family = GraphFamily::Gnm;
    else if (a.family == "regular") spec.family = GraphFamily::Regular;
    else throw std::invalid_argument("--family must be gnm or regular");
    spec.nodes = a.n;
    spec.samples = a.samples;
    spec.j_max = a.j_max;
    spec.h0 = a.h0;
    if (!a.uniform_h.empty()) {
        const auto b = parse_double_list(a.uniform_h);
        if (b.size() != 2) throw std::invalid_argument("--uniform-h expects lo,hi");
        spec.uniform_field = true;
        spec.h_min = b[0];
        spec.h_max = b[1];
    }
    spec.explicit_seed = a.seed_node;
    spec.rng_seed = a.rng_seed;
    if (a.redraw == "per_sample") spec.redraw = RedrawMode::PerSample;
    else if (a.redraw == "fixed_per_point") spec.redraw = RedrawMode::FixedPerPoint;
    else throw std::invalid_argument("--redraw must be per_sample or fixed_per_point");
    spec.workers = a.workers;

    const EnsembleResult result = run_mixed_fraction(spec, parse_sweep(a.sweep));
    for (const EnsemblePoint& p : result.points)
        std::fprintf(stderr, "param %d  mixed %.4f  safe %.4f  infected %.4f\n", p.parameter,
                     p.mixed_fraction, p.safe_fraction, p.infected_fraction);

    const std::string target = output_target(a.output, a.format_given);
    if (!target.empty()) export_ensemble(result, target, parse_format(a.format));
    return 0;
}

struct GeometryArgs {
    std::string fields = "-1,-1,-1", grid = "0:2:0.05", seeds_csv = "0";
    std::string output, format = "csv";
    bool format_given = false;
};

int cmd_geometry(const GeometryArgs& a) {
    const GridAxis axis = parse_grid(a.grid);
    const SeedSet seeds(parse_int_list(a.seeds_csv));
    const GeometryScan scan =
        k3_geometry_scan(parse_double_list(a.fields), axis.lo, axis.hi, axis.step, seeds);

    std::vector<long> counts(scan.labels.size(), 0);
    for (const GeometryCell& c : scan.cells)
        for (size_t i = 0; i < scan.labels.size(); ++i)
            if (scan.labels[i] == c.label) ++counts[i];
    std::fprintf(stderr, "%zu labels over %zu cells:", scan.labels.size(), scan.cells.size());
    for (size_t i = 0; i < scan.labels.size(); ++i)
        std::fprintf(stderr, "  %s x%ld", scan.labels[i].c_str(), counts[i]);
    std::fprintf(stderr, "\n");

    const std::string target = output_target(a.output, a.format_given);
    if (!target.empty()) export_geometry_scan(scan, target, parse_format(a.format));
    return 0;
}

struct SimulateArgs {
    std::string model_path, seeds_csv, output, format = "json";
    bool format_given = false;
    double p = -1.0;  // < 0 means use the model couplings as probabilities
    long runs = 1;
    uint64_t rng_seed = 1;
};

int cmd_simulate(const SimulateArgs& a) {
    const IsingModel model = load_model(a.model_path);
    std::vector<double> probs(model.couplings());
    if (a.p >= 0.0) std::fill(probs.begin(), probs.end(), a.p);
    const CascadeModel cascade(model.graph(), probs);
    const SeedSet seeds(parse_int_list(a.seeds_csv));
    if (a.runs < 1) throw std::invalid_argument("--runs must be positive");

    const CounterRng root(a.rng_seed);
    const std::string target = output_target(a.output, a.format_given);
    if (a.runs == 1) {
        CounterRng rng = root.derive(0);
        const CascadeTrace trace = icm_run(cascade, seeds, rng);
        std::fprintf(stderr, "cascade finished in %d steps, %zu removed of %d\n", trace.steps,
                     trace.removed.size(), model.node_count());
        if (!target.empty()) export_trace(trace, target, parse_format(a.format));
        return 0;
    }

    std::vector<long> removed_counts(model.node_count(), 0);
    long total_steps = 0;
    for (long run = 0; run < a.runs; ++run) {
        CounterRng rng = root.derive(static_cast<uint64_t>(run));
        const CascadeTrace trace = icm_run(cascade, seeds, rng);
        for (int v : trace.removed) ++removed_counts[v];
        total_steps += trace.steps;
    }
    std::fprintf(stderr, "%ld runs, mean steps %.3f\n", a.runs,
                 static_cast<double>(total_steps) / a.runs);
    if (!target.empty()) {
        const ExportFormat format = parse_format(a.format);
        if (format == ExportFormat::Csv) {
            std::string out = "node,removed_count,frequency\n";
            for (int v = 0; v < model.node_count(); ++v) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%d,%ld,%.17g\n", v, removed_counts[v],
                              static_cast<double>(removed_counts[v]) / a.runs);
                out += buf;
            }
            std::ofstream f(target, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write file: " + target);
            f << out;
        } else if (format == ExportFormat::Json) {
            nlohmann::ordered_json j;
            j["runs"] = a.runs;
            j["removed_counts"] = removed_counts;
            nlohmann::ordered_json freq = nlohmann::ordered_json::array();
            for (long c : removed_counts) freq.push_back(static_cast<double>(c) / a.runs);
            j["frequencies"] = freq;
            std::ofstream f(target, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write file: " + target);
            f << j.dump(2) << "\n";
        } else {
            throw std::invalid_argument("unsupported export format for run aggregate");
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pandemic prediction and prevention on attractive pairwise models"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file");

    PredictArgs predict;
    CLI::App* p = app.add_subcommand("predict", "MAP infection pattern for a seed set");
    p->add_option("--model", predict.model_path, "Model JSON (or CSV edge list)")->required();
    p->add_option("--seeds", predict.seeds_csv, "Comma-separated seed node ids")->required();
    p->add_option("--output", predict.output, "Output file");
    p->add_option("--format", predict.format, "json|csv|dot")
        ->check(CLI::IsMember({"json", "csv", "dot"}))
        ->trigger_on_parse()
        ->each([&](const std::string&) { predict.format_given = true; });
    p->add_flag("--brute", predict.brute, "Exhaustive search instead of min-cut");

    SafetyArgs safety;
    CLI::App* s = app.add_subcommand("safety-check", "Exact k-safety across a seed catalog");
    s->add_option("--model", safety.model_path, "Model JSON")->required();
    s->add_option("--k", safety.k, "Catalog = all seed sets of size <= k");
    s->add_option("--catalog", safety.catalog_path, "Explicit seed catalog JSON");
    s->add_option("--workers", safety.workers, "Worker threads (0 = auto)");
    s->add_option("--output", safety.output, "Output file");
    s->add_option("--format", safety.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->trigger_on_parse()
        ->each([&](const std::string&) { safety.format_given = true; });

    PreventArgs prevent;
    CLI::App* v = app.add_subcommand("prevent", "Cheapest correction into the safe region");
    v->add_option("--model", prevent.model_path, "Baseline model JSON")->required();
    v->add_option("--k", prevent.k, "Catalog = all seed sets of size <= k");
    v->add_option("--catalog", prevent.catalog_path, "Explicit seed catalog JSON");
    v->add_option("--l1", prevent.l1, "l1 term weight (default 1)");
    v->add_option("--l2", prevent.l2, "l2 term weight (default 0)");
    v->add_flag("--adjust-fields", prevent.adjust_fields, "Allow field changes too");
    v->add_option("--field-bounds", prevent.field_bounds, "lo,hi bounds with --adjust-fields");
    v->add_option("--feas-tol", prevent.feas_tol, "Feasibility tolerance");
    v->add_option("--opt-tol", prevent.opt_tol, "Optimality tolerance");
    v->add_option("--max-iterations", prevent.max_iterations, "Solver iteration budget");
    v->add_option("--workers", prevent.workers, "Worker threads (0 = auto)");
    v->add_option("--constraints-out", prevent.constraints_out, "Write the constraint CSV here");
    v->add_option("--geometry", prevent.geometry_path, "Region geometry JSON for geojson");
    v->add_option("--output", prevent.output, "Output file");
    v->add_option("--format", prevent.format, "json|csv|dot|geojson")
        ->check(CLI::IsMember({"json", "csv", "dot", "geojson"}))
        ->trigger_on_parse()
        ->each([&](const std::string&) { prevent.format_given = true; });

    EnsembleArgs ensemble;
    CLI::App* e = app.add_subcommand("ensemble", "MAP-class fractions over random models");
    e->add_option("--family", ensemble.family, "gnm|regular");
    e->add_option("--n", ensemble.n, "Node count");
    e->add_option("--sweep", ensemble.sweep, "Parameter sweep lo:hi:step")->required();
    e->add_option("--samples", ensemble.samples, "Samples per sweep point");
    e->add_option("--j-max", ensemble.j_max, "Couplings drawn U(0, j_max)");
    e->add_option("--h0", ensemble.h0, "Constant field value");
    e->add_option("--uniform-h", ensemble.uniform_h, "lo,hi: draw fields uniformly instead");
    e->add_option("--seed-node", ensemble.seed_node, "Fixed seed node (default: random)");
    e->add_option("--redraw", ensemble.redraw, "per_sample|fixed_per_point");
    e->add_option("--rng-seed", ensemble.rng_seed, "RNG seed");
    e->add_option("--workers", ensemble.workers, "Worker threads (0 = auto)");
    e->add_option("--output", ensemble.output, "Output file");
    e->add_option("--format", ensemble.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->trigger_on_parse()
        ->each([&](const std::string&) { ensemble.format_given = true; });

    GeometryArgs geometry;
    CLI::App* g = app.add_subcommand("geometry", "Triangle-graph MAP and safe-region scan");
    g->set_help_flag("--help", "Print help");  // frees -h so --h can name the fields
    g->add_option("--h", geometry.fields, "Three field values, comma-separated");
    g->add_option("--grid", geometry.grid, "Coupling axis lo:hi:step");
    g->add_option("--seeds", geometry.seeds_csv, "Seed ids for the MAP labels");
    g->add_option("--output", geometry.output, "Output file");
    g->add_option("--format", geometry.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->trigger_on_parse()
        ->each([&](const std::string&) { geometry.format_given = true; });

    SimulateArgs simulate;
    CLI::App* m = app.add_subcommand("simulate", "Independent cascade runs");
    m->add_option("--model", simulate.model_path, "Model JSON; couplings act as probabilities")
        ->required();
    m->add_option("--seeds", simulate.seeds_csv, "Comma-separated seed node ids")->required();
    m->add_option("--p", simulate.p, "Override: uniform transmission probability");
    m->add_option("--runs", simulate.runs, "Number of runs (1 = full trace)");
    m->add_option("--rng-seed", simulate.rng_seed, "RNG seed");
    m->add_option("--output", simulate.output, "Output file");
    m->add_option("--format", simulate.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->trigger_on_parse()
        ->each([&](const std::string&) { simulate.format_given = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 3;
    }

    try {
        if (app.got_subcommand(p)) return cmd_predict(predict);
        if (app.got_subcommand(s)) return cmd_safety_check(safety);
        if (app.got_subcommand(v)) return cmd_prevent(prevent);
        if (app.got_subcommand(e)) return cmd_ensemble(ensemble);
        if (app.got_subcommand(g)) return cmd_geometry(geometry);
        if (app.got_subcommand(m)) return cmd_simulate(simulate);
    } catch (const parse_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const capacity_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    } catch (const convergence_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 4;
    } catch (const infeasible_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        for (size_t i = 0; i < err.witness_constraints.size(); ++i)
            std::fprintf(stderr, "  witness: constraint %d weight %.6g\n",
                         err.witness_constraints[i], err.witness_weights[i]);
        return 4;
    } catch (const std::invalid_argument& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
    return 0;
}
