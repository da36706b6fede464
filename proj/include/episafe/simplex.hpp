#pragma once

#include <vector>

namespace episafe {

/// Linear program
///   minimize    c^T x
///   subject to  sum_j rows[i][j] * x_j <= rhs[i]   for every row i
///               lower <= x <= upper               (entries may be +-inf)
struct LpProblem {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::vector<std::pair<int, double>>> rows;  // sparse (var, coeff)
    std::vector<double> rhs;
    /// Optional starting corner: variables flagged here begin at their upper
    /// bound instead of their lower. When the caller knows a feasible bound
    /// assignment (monotone rows), this removes the need for a first phase.
    std::vector<char> start_at_upper;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::IterationLimit;
    std::vector<double> x;
    double objective = 0.0;
    /// Multipliers for the <= rows, nonnegative at an optimum.
    std::vector<double> row_duals;
    /// When infeasible: nonnegative row weights y with sum_i y_i * row_i
    /// unsatisfiable over the variable box (Farkas-style witness).
    std::vector<double> infeasibility_witness;
    long iterations = 0;
};

/// Dense two-phase primal simplex with bounded variables.
///
/// Deterministic pivoting: Dantzig rule with index tie-break, falling back to
/// Bland's rule after a run of degenerate pivots, so repeated solves of the
/// same problem are bit-identical. Intended for the moderate sizes produced
/// by the lazy-constraint loop in the projection module (hundreds of rows
/// and columns), not as a general sparse LP code.
LpResult solve_lp(const LpProblem& problem, long max_iterations = 200000);

}  // namespace episafe
