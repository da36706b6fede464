#pragma once

#include <vector>

namespace episafe {

// Nonnegative least squares: minimize ||E z - f||_2 subject to z >= 0.
// Active-set method (Lawson-Hanson). E is row-major, rows x cols.
struct NnlsResult {
    std::vector<double> z;
    double residual_norm = 0.0;
    long iterations = 0;
    bool converged = false;
};

NnlsResult nnls(int rows, int cols, const std::vector<double>& E, const std::vector<double>& f,
                long max_iterations = 20000);

// Least distance programming: minimize ||y||_2 subject to G y >= h.
// Reduced to NNLS on the stacked matrix [G^T; h^T]. When the constraint set is
// empty, `feasible` is false and `farkas` holds nonnegative row weights lam
// with G^T lam ~ 0 and h^T lam > 0, certifying that no y can satisfy all rows.
// Otherwise `multipliers` are KKT multipliers for the rows (zero on inactive
// rows), usable to certify optimality of the quadratic objective.
struct LdpResult {
    bool feasible = false;
    std::vector<double> y;
    std::vector<double> multipliers;
    std::vector<double> farkas;
    long iterations = 0;
    bool converged = false;
};

LdpResult solve_ldp(int num_rows, int dim, const std::vector<double>& G,
                    const std::vector<double>& h, long max_iterations = 20000);

}  // namespace episafe
