// Acceptance gate for the episafe pipeline. Runs ten end-to-end checks and
// prints exactly one PASS/FAIL line per check; the process exit code is the
// number of failed checks. Tolerances are pinned here, next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "episafe/cascade.hpp"
#include "episafe/ensemble.hpp"
#include "episafe/io.hpp"
#include "episafe/map_inference.hpp"
#include "episafe/model.hpp"
#include "episafe/projection.hpp"
#include "episafe/rng.hpp"
#include "episafe/safe_polytope.hpp"
#include "episafe/stats.hpp"
#include "helpers.hpp"

using namespace episafe;
using test::CliResult;
using test::complete_graph;
using test::data_file;
using test::random_attractive;
using test::random_graph;
using test::read_file;
using test::run_cli;
using test::temp_path;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Gate {
    int failures = 0;

    void report(int index, const std::string& name, bool ok, const std::string& detail) {
        std::printf("%s  %2d  %-24s  %s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

int sign_of(double v) {
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
}

// --- 1. min-cut MAP equals brute-force MAP on random attractive models ----

void check_oracle_equivalence(Gate& gate) {
    constexpr int kInstances = 500;
    constexpr double kEnergyTol = 1e-9;
    constexpr double kTimeLimit = 60.0;

    const auto start = Clock::now();
    CounterRng root(0xACCE9901ULL);
    int mismatches = 0;
    double worst = 0.0;
    for (int trial = 0; trial < kInstances; ++trial) {
        CounterRng rng = root.derive(trial);
        const int n = 2 + rng.uniform_int(11);  // 2..12
        const int max_m = n * (n - 1) / 2;
        const int m = rng.uniform_int(max_m + 1);
        Graph g = random_graph(rng, n, m);
        IsingModel model = random_attractive(rng, g);
        SeedSet seeds({static_cast<int>(rng.uniform_int(n))});

        MapResult cut = map_mincut(model, seeds);
        MapResult brute = map_bruteforce(model, seeds);
        const double diff = std::abs(cut.energy - brute.energy);
        worst = std::max(worst, diff);
        if (diff > kEnergyTol) ++mismatches;
    }
    const double elapsed = seconds_since(start);
    const bool ok = mismatches == 0 && elapsed < kTimeLimit;
    gate.report(1, "oracle-equivalence",
                ok,
                std::to_string(kInstances) + " instances, " + std::to_string(mismatches) +
                    " energy mismatches, worst gap " + fmt(worst, 3) + ", " + fmt(elapsed, 3) +
                    " s (limit " + fmt(kTimeLimit, 3) + " s)");
}

// --- 2. two-mode residual sign agrees with the energy comparison ----------

void check_two_mode_soundness(Gate& gate) {
    constexpr int kPairs = 10000;
    constexpr double kIdentityTol = 1e-9;

    CounterRng root(0x70D0DE02ULL);
    int sign_mismatches = 0;
    int identity_breaks = 0;
    for (int trial = 0; trial < kPairs; ++trial) {
        CounterRng rng = root.derive(trial);
        const int n = 2 + rng.uniform_int(7);  // 2..8
        const int max_m = n * (n - 1) / 2;
        const int m = rng.uniform_int(max_m + 1);
        Graph g = random_graph(rng, n, m);
        IsingModel model = random_attractive(rng, g);

        const int seed_count = 1 + rng.uniform_int(std::min(3, n));
        std::vector<int> ids(n);
        for (int v = 0; v < n; ++v) ids[v] = v;
        rng.shuffle(ids);
        ids.resize(seed_count);
        SeedSet seeds(ids);

        SafetyConstraint c = two_mode_constraint(g, seeds);
        // residual() is lhs - rhs; the slack (rhs - lhs) carries the sign of
        // the energy gap E(all +1) - E(only seeds +1), and equals half of it.
        const double slack = -c.residual(model);

        std::vector<int8_t> spins(n, -1);
        for (int v : seeds.nodes) spins[v] = 1;
        const double gap =
            energy(model, SpinState::all(n, 1)) - energy(model, SpinState(spins));

        if (std::abs(2.0 * slack - gap) > kIdentityTol) ++identity_breaks;
        if (sign_of(slack) != sign_of(gap) &&
            std::max(std::abs(slack), std::abs(gap)) > kIdentityTol)
            ++sign_mismatches;
    }
    const bool ok = sign_mismatches == 0 && identity_breaks == 0;
    gate.report(2, "two-mode-soundness", ok,
                std::to_string(kPairs) + " pairs, " + std::to_string(sign_mismatches) +
                    " sign mismatches, " + std::to_string(identity_breaks) +
                    " identity breaks (tol " + fmt(kIdentityTol, 3) + ")");
}

// --- 3 & 4. triangle geometry scan -----------------------------------------

GeometryScan run_triangle_scan(Gate& gate) {
    constexpr double kStep = 0.05;
    constexpr double kTimeLimit = 30.0;

    const auto start = Clock::now();
    GeometryScan scan = k3_geometry_scan({-1.0, -1.0, -1.0}, 0.0, 2.0, kStep, SeedSet({0}));
    const double elapsed = seconds_since(start);

    long safe_cells = 0, infected_cells = 0, mixed_cells = 0;
    for (const GeometryCell& cell : scan.cells) {
        if (cell.label == "+--")
            ++safe_cells;
        else if (cell.label == "+++")
            ++infected_cells;
        else
            ++mixed_cells;
    }
    const bool ok = scan.labels.size() == 4 && mixed_cells < safe_cells &&
                    mixed_cells < infected_cells && elapsed < kTimeLimit;
    gate.report(3, "triangle-geometry", ok,
                std::to_string(scan.cells.size()) + " cells, " +
                    std::to_string(scan.labels.size()) + " labels, mixed " +
                    std::to_string(mixed_cells) + " < safe " + std::to_string(safe_cells) +
                    " / infected " + std::to_string(infected_cells) + ", " + fmt(elapsed, 3) +
                    " s (limit " + fmt(kTimeLimit, 3) + " s)");
    return scan;
}

void check_polytope_containment(Gate& gate, const GeometryScan& scan) {
    const std::string log_path = "two_mode_discrepancies.csv";
    std::ofstream log(log_path);
    log << "j01,j02,j12,label,seed0_class,seed1_class,seed2_class\n";

    Graph triangle(3, {{0, 1}, {0, 2}, {1, 2}});
    long exact_cells = 0, two_mode_cells = 0;
    long containment_violations = 0;
    long discrepancies = 0, non_mixed_discrepancies = 0;
    for (const GeometryCell& cell : scan.cells) {
        if (cell.in_exact) ++exact_cells;
        if (cell.in_two_mode) ++two_mode_cells;
        if (cell.in_exact && !cell.in_two_mode) ++containment_violations;
        if (!(cell.in_two_mode && !cell.in_exact)) continue;

        ++discrepancies;
        IsingModel model(triangle, {cell.j01, cell.j02, cell.j12}, {-1.0, -1.0, -1.0});
        bool mixed_somewhere = false;
        std::string classes;
        for (int v = 0; v < 3; ++v) {
            MapResult r = map_mincut(model, SeedSet({v}));
            MapClass cls = classify_map(r, SeedSet({v}));
            mixed_somewhere = mixed_somewhere || cls == MapClass::Mixed;
            classes += ',';
            classes += to_string(cls);
        }
        if (!mixed_somewhere) ++non_mixed_discrepancies;
        log << fmt(cell.j01, 17) << ',' << fmt(cell.j02, 17) << ',' << fmt(cell.j12, 17) << ','
            << cell.label << classes << '\n';
    }
    log.close();

    const bool ok = containment_violations == 0 && non_mixed_discrepancies == 0;
    gate.report(4, "polytope-containment", ok,
                "exact " + std::to_string(exact_cells) + " cells inside two-mode " +
                    std::to_string(two_mode_cells) + ", containment violations " +
                    std::to_string(containment_violations) + ", " +
                    std::to_string(discrepancies) + " two-mode-only cells (" +
                    std::to_string(non_mixed_discrepancies) +
                    " without a mixed MAP) logged to " + log_path);
}

// --- 5. mixed-state fraction shrinks with graph density --------------------

void check_ensemble_trend(Gate& gate) {
    constexpr int kSamples = 500;
    constexpr double kTimeLimit = 600.0;
    constexpr double kPThreshold = 0.01;

    const auto start = Clock::now();
    EnsembleSpec spec;
    spec.family = GraphFamily::Gnm;
    spec.nodes = 20;
    spec.samples = kSamples;
    spec.j_max = 2.0;
    spec.uniform_field = false;
    spec.h0 = -1.0;
    spec.rng_seed = 1;
    spec.redraw = RedrawMode::PerSample;

    std::vector<int> sweep{20, 40, 60, 80, 100, 120, 140, 160, 180, 190};
    EnsembleResult result = run_mixed_fraction(spec, sweep);
    const double elapsed = seconds_since(start);

    std::vector<double> xs, ys;
    for (const EnsemblePoint& p : result.points) {
        xs.push_back(static_cast<double>(p.parameter));
        ys.push_back(p.mixed_fraction);
    }
    const double first = ys.front(), last = ys.back();
    const double rho = spearman_rho(xs, ys);
    const double pvalue = spearman_pvalue_leq(xs, ys);

    const bool ok = last <= first && rho < 0.0 && pvalue < kPThreshold && elapsed < kTimeLimit;
    gate.report(5, "ensemble-trend", ok,
                "mixed(" + std::to_string(sweep.front()) + ")=" + fmt(first, 4) + ", mixed(" +
                    std::to_string(sweep.back()) + ")=" + fmt(last, 4) + ", rho=" + fmt(rho, 4) +
                    ", p=" + fmt(pvalue, 4) + " (< " + fmt(kPThreshold, 3) + "), " +
                    fmt(elapsed, 3) + " s (limit " + fmt(kTimeLimit, 3) + " s)");
}

// --- 6. prevention sweep over the bundled 20-node fixture ------------------

void check_prevention_sweep(Gate& gate) {
    constexpr double kGapTol = 1e-6;
    constexpr double kFeasTol = 1e-8;
    constexpr double kK4TimeLimit = 300.0;
    const std::vector<int> expected_counts{20, 210, 1350, 6195};

    IsingModel model = load_model(data_file("seattle20.json"));
    bool counts_ok = true, order_ok = true, quality_ok = true, time_ok = true;
    std::string detail;
    double previous_cost = -1.0;
    double k4_elapsed = 0.0;
    for (int k = 1; k <= 4; ++k) {
        SeedCatalog catalog = enumerate_seed_catalog(model.graph(), k);
        std::vector<SafetyConstraint> constraints =
            build_two_mode_polytope(model.graph(), catalog);
        if (static_cast<int>(constraints.size()) != expected_counts[k - 1]) counts_ok = false;

        const auto start = Clock::now();
        PreventionProblem problem = make_prevention_problem(model, constraints);
        PreventionSolution sol = project_to_safe(problem);
        const double elapsed = seconds_since(start);
        if (k == 4) k4_elapsed = elapsed;

        if (sol.cost < previous_cost - 1e-9) order_ok = false;
        previous_cost = sol.cost;

        double max_violation = 0.0;
        for (const SafetyConstraint& c : constraints)
            max_violation = std::max(max_violation, c.residual(sol.corrected));
        if (sol.stats.optimality_gap > kGapTol || max_violation > kFeasTol) quality_ok = false;
        if (k == 4 && elapsed >= kK4TimeLimit) time_ok = false;

        if (!detail.empty()) detail += "; ";
        detail += "k=" + std::to_string(k) + ": " + std::to_string(constraints.size()) +
                  " rows, cost " + fmt(sol.cost, 10) + ", gap " + fmt(sol.stats.optimality_gap, 3) +
                  ", viol " + fmt(max_violation, 3);
    }
    const bool ok = counts_ok && order_ok && quality_ok && time_ok;
    gate.report(6, "prevention-sweep", ok,
                detail + "; k=4 in " + fmt(k4_elapsed, 3) + " s (limit " + fmt(kK4TimeLimit, 3) +
                    " s)");
}

// --- 7. l1 corrections touch no more couplings than l2 ---------------------

void check_sparsity(Gate& gate) {
    constexpr double kNnzThreshold = 1e-6;

    IsingModel model = load_model(data_file("seattle20.json"));
    std::string detail;
    bool ok = true;
    for (int k = 1; k <= 2; ++k) {
        SeedCatalog catalog = enumerate_seed_catalog(model.graph(), k);
        std::vector<SafetyConstraint> constraints =
            build_two_mode_polytope(model.graph(), catalog);

        auto nnz_for = [&](double l1, double l2) {
            NormSpec norm;
            norm.l1_weight = l1;
            norm.l2_weight = l2;
            PreventionSolution sol =
                project_to_safe(make_prevention_problem(model, constraints, norm));
            int nnz = 0;
            for (int e = 0; e < model.graph().edge_count(); ++e)
                if (std::abs(sol.corrected.coupling(e) - model.coupling(e)) > kNnzThreshold)
                    ++nnz;
            return nnz;
        };
        const int nnz_l1 = nnz_for(1.0, 0.0);
        const int nnz_l2 = nnz_for(0.0, 1.0);
        if (nnz_l1 > nnz_l2) ok = false;
        if (!detail.empty()) detail += "; ";
        detail += "k=" + std::to_string(k) + ": nnz(l1)=" + std::to_string(nnz_l1) +
                  " <= nnz(l2)=" + std::to_string(nnz_l2);
    }
    gate.report(7, "l1-sparser-than-l2", ok, detail + " (threshold " + fmt(kNnzThreshold, 3) + ")");
}

// --- 8. certification closes the two-mode gap ------------------------------

void check_certification(Gate& gate) {
    constexpr int kInstances = 50;

    CounterRng root(0xCE271908ULL);
    int certified = 0;
    for (int trial = 0; trial < kInstances; ++trial) {
        CounterRng rng = root.derive(trial);
        Graph g = complete_graph(20);
        IsingModel model = random_attractive(rng, g);
        SeedCatalog catalog = enumerate_seed_catalog(g, 1);
        std::vector<SafetyConstraint> constraints = build_two_mode_polytope(g, catalog);
        PreventionSolution sol = project_to_safe(make_prevention_problem(model, constraints));
        SafetyReport report = is_k_safe_exact(sol.corrected, catalog, 1);
        if (report.safe) ++certified;
    }

    const std::string out = temp_path("acceptance_chain") + ".json";
    CliResult chain = run_cli(
        {"prevent", "--model", data_file("chain5.json"), "--k", "1", "--output", out});
    std::remove(out.c_str());

    const bool ok = certified == kInstances && chain.status == 5;
    gate.report(8, "certification", ok,
                std::to_string(certified) + "/" + std::to_string(kInstances) +
                    " dense corrections certified; adversarial chain exit code " +
                    std::to_string(chain.status) + " (want 5)");
}

// --- 9. cascade invariants --------------------------------------------------

void check_cascade_invariants(Gate& gate) {
    constexpr int kRuns = 10000;

    CounterRng root(0x1C311711ULL);
    int invariant_breaks = 0, reachability_mismatches = 0, certain_runs = 0;
    for (int trial = 0; trial < kRuns; ++trial) {
        CounterRng rng = root.derive(trial);
        const int n = 2 + rng.uniform_int(11);  // 2..12
        const int max_m = n * (n - 1) / 2;
        const int m = rng.uniform_int(max_m + 1);
        Graph g = random_graph(rng, n, m);

        const bool certain = trial % 10 == 0;
        if (certain) ++certain_runs;
        const double p = certain ? 1.0 : rng.uniform();
        CascadeModel cascade(g, std::vector<double>(g.edge_count(), p));

        const int seed_count = 1 + rng.uniform_int(std::min(2, n));
        std::vector<int> ids(n);
        for (int v = 0; v < n; ++v) ids[v] = v;
        rng.shuffle(ids);
        ids.resize(seed_count);
        SeedSet seeds(ids);

        CounterRng run_rng = rng.derive(777);
        CascadeTrace trace = icm_run(cascade, seeds, run_rng);

        bool good = trace.steps <= n &&
                    static_cast<int>(trace.states.size()) == trace.steps + 1;
        for (size_t t = 0; good && t + 1 < trace.states.size(); ++t) {
            for (int v = 0; v < n; ++v) {
                NodeState before = trace.states[t][v], after = trace.states[t + 1][v];
                if (before == NodeState::Susceptible &&
                    after == NodeState::Removed)
                    good = false;
                if (before == NodeState::Infected && after != NodeState::Removed) good = false;
                if (before == NodeState::Removed && after != NodeState::Removed) good = false;
            }
        }
        std::vector<int> terminal;
        for (int v = 0; v < n; ++v) {
            NodeState final_state = trace.states.back()[v];
            if (final_state == NodeState::Infected) good = false;
            if (final_state == NodeState::Removed) terminal.push_back(v);
        }
        if (terminal != trace.removed) good = false;
        if (!good) ++invariant_breaks;

        if (certain) {
            // Breadth-first reachability from the seeds.
            std::vector<char> seen(n, 0);
            std::vector<int> queue = seeds.nodes;
            for (int v : queue) seen[v] = 1;
            for (size_t head = 0; head < queue.size(); ++head)
                for (const auto& [nb, edge] : g.incident(queue[head]))
                    if (!seen[nb]) {
                        seen[nb] = 1;
                        queue.push_back(nb);
                    }
            std::vector<int> reachable;
            for (int v = 0; v < n; ++v)
                if (seen[v]) reachable.push_back(v);
            if (reachable != trace.removed) ++reachability_mismatches;
        }
    }
    const bool ok = invariant_breaks == 0 && reachability_mismatches == 0;
    gate.report(9, "cascade-invariants", ok,
                std::to_string(kRuns) + " runs, " + std::to_string(invariant_breaks) +
                    " invariant breaks; " + std::to_string(certain_runs) +
                    " certain-transmission runs, " + std::to_string(reachability_mismatches) +
                    " reachability mismatches");
}

// --- 10. byte-identical CLI reruns ------------------------------------------

void check_cli_determinism(Gate& gate) {
    struct Case {
        std::string name;
        std::vector<std::string> args;  // without --output
    };
    const std::vector<Case> cases{
        {"predict", {"predict", "--model", data_file("seattle20.json"), "--seeds", "3,7"}},
        {"safety-check", {"safety-check", "--model", data_file("seattle20.json"), "--k", "2"}},
        {"prevent", {"prevent", "--model", data_file("seattle20.json"), "--k", "1"}},
        {"simulate",
         {"simulate", "--model", data_file("seattle20.json"), "--seeds", "0", "--p", "0.4",
          "--runs", "40", "--rng-seed", "11"}},
        {"ensemble",
         {"ensemble", "--n", "12", "--samples", "40", "--sweep", "6:18:6", "--rng-seed", "3",
          "--format", "csv"}},
        {"geometry",
         {"geometry", "--h", "-1,-1,-1", "--grid", "0:1:0.25", "--seeds", "0", "--format",
          "csv"}},
    };

    int identical = 0;
    std::string failed;
    for (const Case& c : cases) {
        const std::string out_a = temp_path("det_a_" + c.name);
        const std::string out_b = temp_path("det_b_" + c.name);
        auto with_output = [&](const std::string& path) {
            std::vector<std::string> args = c.args;
            args.push_back("--output");
            args.push_back(path);
            return args;
        };
        CliResult ra = run_cli(with_output(out_a));
        CliResult rb = run_cli(with_output(out_b));
        const std::string bytes_a = read_file(out_a);
        const std::string bytes_b = read_file(out_b);
        std::remove(out_a.c_str());
        std::remove(out_b.c_str());
        if (ra.status == 0 && rb.status == 0 && !bytes_a.empty() && bytes_a == bytes_b) {
            ++identical;
        } else {
            if (!failed.empty()) failed += ",";
            failed += c.name;
        }
    }
    const bool ok = identical == static_cast<int>(cases.size());
    gate.report(10, "cli-determinism", ok,
                std::to_string(identical) + "/" + std::to_string(cases.size()) +
                    " subcommands byte-identical" +
                    (failed.empty() ? std::string() : " (failed: " + failed + ")"));
}

}  // namespace

int main() {
    Gate gate;
    check_oracle_equivalence(gate);
    check_two_mode_soundness(gate);
    GeometryScan scan = run_triangle_scan(gate);
    check_polytope_containment(gate, scan);
    check_ensemble_trend(gate);
    check_prevention_sweep(gate);
    check_sparsity(gate);
    check_certification(gate);
    check_cascade_invariants(gate);
    check_cli_determinism(gate);

    if (gate.failures == 0)
        std::printf("ACCEPTANCE: all 10 checks passed\n");
    else
        std::printf("ACCEPTANCE: %d check(s) failed\n", gate.failures);
    return gate.failures;
}
