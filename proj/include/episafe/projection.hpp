#pragma once

#include <optional>
#include <string>
#include <vector>

#include "episafe/model.hpp"
#include "episafe/safe_polytope.hpp"

namespace episafe {

// Weighted intervention norm: l1_weight * sum_j w_j |dx_j|
//                           + l2_weight * sqrt(sum_j w_j dx_j^2).
// variable_weights runs over the full parameter vector (couplings first, then
// fields) and defaults to all ones; at least one of the two term weights must
// be positive.
struct NormSpec {
    double l1_weight = 1.0;
    double l2_weight = 0.0;
    std::vector<double> variable_weights;
};

// Projection instance: find the cheapest parameter change that moves the
// baseline model into the region described by `constraints`. Parameters are
// indexed couplings-first (edge order of the graph), fields after. Frozen
// parameters keep their baseline value exactly.
struct PreventionProblem {
    IsingModel baseline;
    std::vector<SafetyConstraint> constraints;
    NormSpec norm;
    std::vector<char> adjustable;  // length edges+nodes
    std::vector<double> lower;     // absolute bounds on parameter values
    std::vector<double> upper;

    explicit PreventionProblem(IsingModel base) : baseline(std::move(base)) {}
};

// Default policy: couplings may be reduced anywhere in [0, J0], fields stay
// frozen at their baseline values.
PreventionProblem make_prevention_problem(IsingModel baseline,
                                          std::vector<SafetyConstraint> constraints,
                                          NormSpec norm = {});

struct SolverOptions {
    double feasibility_tol = 1e-8;
    double optimality_tol = 1e-6;
    long max_iterations = 200000;
    int max_lazy_rounds = 100;
    // Corrected models must satisfy each constraint with at least this much
    // strict slack (scaled by the constraint's magnitude). A projection that
    // lands exactly on the boundary leaves the certified property to the sign
    // of rounding noise; the margin keeps the result strictly inside.
    double safety_margin = 1e-8;
};

struct SolverStats {
    std::string method;  // "baseline", "simplex", "nnls", "pdhg"
    long iterations = 0;
    double feasibility_residual = 0.0;  // max constraint violation at the answer
    double optimality_gap = 0.0;        // certified primal-dual gap
    int active_constraints = 0;         // working-set size in the final solve
    int lazy_rounds = 0;
};

struct PreventionSolution {
    IsingModel corrected;
    double cost = 0.0;
    std::vector<double> constraint_slack;  // residual per input constraint (<= 0 means satisfied)
    SolverStats stats;
    bool baseline_already_safe = false;

    explicit PreventionSolution(IsingModel model) : corrected(std::move(model)) {}
};

// Cost of moving between two models under the given norm. Both models must
// share the same graph.
double intervention_cost(const IsingModel& baseline, const IsingModel& corrected,
                         const NormSpec& norm);

// Minimum-cost projection onto the constraint set. Returns the baseline
// unchanged (cost 0) when it already satisfies every constraint. Throws
// infeasible_error with a row certificate when no parameter setting within
// bounds can satisfy the constraints, and convergence_error when the solver
// cannot certify the requested tolerances within the iteration budget.
PreventionSolution project_to_safe(const PreventionProblem& problem,
                                   const SolverOptions& options = {});

}  // namespace episafe
