#include "episafe/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace episafe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-9;
constexpr double kPerturbScale = 1e-9;

// Deterministic per-row jitter in [0.5, 1.5), used to break rhs ties. Highly
// symmetric instances otherwise stall the simplex in huge degenerate pivot
// runs; distinct right-hand sides make every vertex basis unique.
double row_jitter(int i) {
    uint64_t z = static_cast<uint64_t>(i) + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return 0.5 + static_cast<double>(z >> 11) * 0x1.0p-53;
}

enum class VarStatus { Basic, AtLower, AtUpper, FreeAtZero };

struct Tableau {
    int rows = 0;
    int cols = 0;    // columns in use
    int stride = 0;  // allocated row width (>= cols)
    std::vector<double> a;          // rows x stride, row-major, kept row-reduced
    std::vector<double> rhs;        // reduced right-hand side
    std::vector<double> lower, upper;
    std::vector<VarStatus> status;
    std::vector<char> allowed;      // may enter the basis
    std::vector<int> basis;         // column basic in each row
    std::vector<double> xb;         // values of basic variables
    std::vector<double> d;          // reduced costs
    long pivots = 0;

    double& at(int i, int j) { return a[static_cast<size_t>(i) * stride + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * stride + j]; }

    double nonbasic_value(int j) const {
        switch (status[j]) {
            case VarStatus::AtLower: return lower[j];
            case VarStatus::AtUpper: return upper[j];
            default: return 0.0;
        }
    }

    void refresh_basic_values() {
        for (int i = 0; i < rows; ++i) xb[i] = rhs[i];
        for (int j = 0; j < cols; ++j) {
            if (status[j] == VarStatus::Basic) continue;
            const double v = nonbasic_value(j);
            if (v == 0.0) continue;
            for (int i = 0; i < rows; ++i) xb[i] -= at(i, j) * v;
        }
    }

    void reset_costs(const std::vector<double>& c) {
        d.assign(cols, 0.0);
        for (int j = 0; j < cols; ++j) d[j] = j < static_cast<int>(c.size()) ? c[j] : 0.0;
        for (int i = 0; i < rows; ++i) {
            const int jb = basis[i];
            const double cb = jb < static_cast<int>(c.size()) ? c[jb] : 0.0;
            if (cb == 0.0) continue;
            for (int j = 0; j < cols; ++j) d[j] -= cb * at(i, j);
        }
    }

    // Returns LpStatus::Optimal when no improving column remains. `costs` is
    // kept around so the incrementally-updated reduced costs can be rebuilt
    // from scratch at intervals; without that, drift across long degenerate
    // runs fabricates entering columns near the optimum and the walk stalls.
    LpStatus iterate(const std::vector<double>& costs, long max_iterations) {
        int degenerate_run = 0;
        bool bland = false;
        long last_refresh = pivots;
        const bool debug = std::getenv("EPISAFE_LP_DEBUG") != nullptr;
        long dbg_degenerate = 0, dbg_flips = 0, dbg_bland = 0;
        double dbg_improve = 0.0;
        while (pivots < max_iterations) {
            if (debug && pivots % 2000 == 0) {
                std::fprintf(stderr,
                             "[lp] pivots=%ld degen=%ld flips=%ld bland=%ld improve=%.6g run=%d\n",
                             pivots, dbg_degenerate, dbg_flips, dbg_bland, dbg_improve,
                             degenerate_run);
                dbg_degenerate = dbg_flips = dbg_bland = 0;
                dbg_improve = 0.0;
            }
            if (pivots - last_refresh >= 256) {
                refresh_basic_values();
                reset_costs(costs);
                last_refresh = pivots;
            }
            // --- entering column ---
            int enter = -1;
            double best_score = kReducedCostTol;
            int sigma = +1;
            for (int j = 0; j < cols; ++j) {
                if (!allowed[j] || status[j] == VarStatus::Basic) continue;
                if (upper[j] - lower[j] <= 0.0 && status[j] != VarStatus::FreeAtZero) continue;
                int dir = 0;
                if (status[j] == VarStatus::AtLower && d[j] < -kReducedCostTol) dir = +1;
                else if (status[j] == VarStatus::AtUpper && d[j] > kReducedCostTol) dir = -1;
                else if (status[j] == VarStatus::FreeAtZero && std::abs(d[j]) > kReducedCostTol)
                    dir = d[j] < 0.0 ? +1 : -1;
                if (dir == 0) continue;
                if (bland) { enter = j; sigma = dir; break; }
                if (std::abs(d[j]) > best_score) {
                    best_score = std::abs(d[j]);
                    enter = j;
                    sigma = dir;
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            // --- ratio test ---
            double t = kInf;
            bool is_flip = false;
            int leave_row = -1;
            bool leaving_to_upper = false;
            if (status[enter] != VarStatus::FreeAtZero &&
                std::isfinite(upper[enter] - lower[enter])) {
                t = upper[enter] - lower[enter];
                is_flip = true;
            }
            for (int i = 0; i < rows; ++i) {
                const double alpha = sigma * at(i, enter);
                if (std::abs(alpha) <= kPivotTol) continue;
                const int k = basis[i];
                double limit = kInf;
                bool to_upper = false;
                if (alpha > 0.0) {
                    if (std::isfinite(lower[k])) limit = (xb[i] - lower[k]) / alpha;
                } else {
                    if (std::isfinite(upper[k])) {
                        limit = (upper[k] - xb[i]) / (-alpha);
                        to_upper = true;
                    }
                }
                if (limit < -0.0) limit = 0.0;
                if (limit < t - 1e-13 || (limit <= t + 1e-13 && leave_row >= 0 &&
                                          basis[i] < basis[leave_row])) {
                    t = std::max(limit, 0.0);
                    is_flip = false;
                    leave_row = i;
                    leaving_to_upper = to_upper;
                }
            }
            if (!std::isfinite(t)) return LpStatus::Unbounded;

            ++pivots;
            if (debug) {
                if (t <= kDegenerateStep) ++dbg_degenerate;
                if (is_flip) ++dbg_flips;
                if (bland) ++dbg_bland;
                dbg_improve += std::abs(d[enter]) * t;
            }
            if (t <= kDegenerateStep) {
                if (++degenerate_run > 100) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }

            if (is_flip) {
                for (int i = 0; i < rows; ++i) xb[i] -= sigma * at(i, enter) * t;
                status[enter] =
                    status[enter] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
                continue;
            }

            // --- pivot ---
            const double enter_value = nonbasic_value(enter) + sigma * t;
            for (int i = 0; i < rows; ++i)
                if (i != leave_row) xb[i] -= sigma * at(i, enter) * t;

            const int leaving = basis[leave_row];
            status[leaving] = leaving_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
            if (!std::isfinite(nonbasic_value(leaving))) status[leaving] = VarStatus::FreeAtZero;

            const double piv = at(leave_row, enter);
            const double inv = 1.0 / piv;
            for (int j = 0; j < cols; ++j) at(leave_row, j) *= inv;
            rhs[leave_row] *= inv;
            for (int i = 0; i < rows; ++i) {
                if (i == leave_row) continue;
                const double f = at(i, enter);
                if (f == 0.0) continue;
                for (int j = 0; j < cols; ++j) at(i, j) -= f * at(leave_row, j);
                rhs[i] -= f * rhs[leave_row];
                at(i, enter) = 0.0;
            }
            {
                const double f = d[enter];
                if (f != 0.0)
                    for (int j = 0; j < cols; ++j) d[j] -= f * at(leave_row, j);
                d[enter] = 0.0;
            }
            basis[leave_row] = enter;
            status[enter] = VarStatus::Basic;
            xb[leave_row] = enter_value;
        }
        return LpStatus::IterationLimit;
    }

    // Dual simplex sweep: drives basic variables back inside their bounds
    // while preserving dual feasibility. Used after the perturbed rhs is
    // replaced with the exact one, which can leave a few basics slightly
    // outside their bounds. Returns Optimal once primal feasible.
    LpStatus dual_iterate(long max_iterations) {
        constexpr double kBoundTol = 1e-10;
        while (pivots < max_iterations) {
            int row = -1;
            double worst = kBoundTol;
            bool below = false;
            for (int i = 0; i < rows; ++i) {
                const int k = basis[i];
                const double lo_gap = lower[k] - xb[i];
                const double up_gap = xb[i] - upper[k];
                if (lo_gap > worst) { worst = lo_gap; row = i; below = true; }
                if (up_gap > worst) { worst = up_gap; row = i; below = false; }
            }
            if (row < 0) return LpStatus::Optimal;

            // The leaving variable exits to its violated bound; pick the
            // entering column by the dual ratio test so reduced-cost signs
            // stay consistent with every nonbasic bound status.
            int enter = -1;
            double best_ratio = kInf;
            for (int j = 0; j < cols; ++j) {
                if (!allowed[j] || status[j] == VarStatus::Basic) continue;
                if (upper[j] - lower[j] <= 0.0 && status[j] != VarStatus::FreeAtZero) continue;
                const double arj = at(row, j);
                if (std::abs(arj) <= kPivotTol) continue;
                int sigma;
                if (status[j] == VarStatus::AtLower) sigma = +1;
                else if (status[j] == VarStatus::AtUpper) sigma = -1;
                else sigma = (below ? (arj > 0.0 ? -1 : +1) : (arj > 0.0 ? +1 : -1));
                const double push = -arj * sigma;  // effect on the leaving basic
                if (below ? push <= 0.0 : push >= 0.0) continue;
                const double ratio = std::abs(d[j]) / std::abs(arj);
                if (ratio < best_ratio - 1e-13 ||
                    (ratio <= best_ratio + 1e-13 && (enter < 0 || j < enter))) {
                    best_ratio = ratio;
                    enter = j;
                }
            }
            if (enter < 0) return LpStatus::IterationLimit;  // cannot repair this row

            ++pivots;
            const int leaving = basis[row];
            status[leaving] = below ? VarStatus::AtLower : VarStatus::AtUpper;
            if (!std::isfinite(nonbasic_value(leaving))) status[leaving] = VarStatus::FreeAtZero;

            const double piv = at(row, enter);
            const double inv = 1.0 / piv;
            for (int j = 0; j < cols; ++j) at(row, j) *= inv;
            rhs[row] *= inv;
            for (int i = 0; i < rows; ++i) {
                if (i == row) continue;
                const double f = at(i, enter);
                if (f == 0.0) continue;
                for (int j = 0; j < cols; ++j) at(i, j) -= f * at(row, j);
                rhs[i] -= f * rhs[row];
                at(i, enter) = 0.0;
            }
            {
                const double f = d[enter];
                if (f != 0.0)
                    for (int j = 0; j < cols; ++j) d[j] -= f * at(row, j);
                d[enter] = 0.0;
            }
            basis[row] = enter;
            status[enter] = VarStatus::Basic;
            refresh_basic_values();
        }
        return LpStatus::IterationLimit;
    }
};

LpResult solve_lp_impl(const LpProblem& p, long max_iterations, bool perturb) {
    const int n = p.num_vars;
    const int m = static_cast<int>(p.rows.size());
    if (static_cast<int>(p.objective.size()) != n || static_cast<int>(p.lower.size()) != n ||
        static_cast<int>(p.upper.size()) != n || static_cast<int>(p.rhs.size()) != m)
        throw std::invalid_argument("inconsistent LP dimensions");
    for (int j = 0; j < n; ++j)
        if (p.lower[j] > p.upper[j]) throw std::invalid_argument("variable bound lower > upper");

    Tableau t;
    t.rows = m;
    std::vector<int> artificial_of_row(m, -1);

    // Allocate for the worst case (one artificial per row); the column count
    // is trimmed once the artificials actually needed are known.
    const int cols_max = n + 2 * m;
    t.a.assign(static_cast<size_t>(m) * cols_max, 0.0);
    t.stride = cols_max;
    t.cols = cols_max;
    t.rhs.assign(m, 0.0);
    t.lower.assign(cols_max, 0.0);
    t.upper.assign(cols_max, kInf);
    t.status.assign(cols_max, VarStatus::AtLower);
    t.allowed.assign(cols_max, 0);
    t.basis.assign(m, -1);
    t.xb.assign(m, 0.0);

    for (int j = 0; j < n; ++j) {
        t.lower[j] = p.lower[j];
        t.upper[j] = p.upper[j];
        t.allowed[j] = 1;
        const bool want_upper =
            j < static_cast<int>(p.start_at_upper.size()) && p.start_at_upper[j];
        if (want_upper && std::isfinite(p.upper[j])) t.status[j] = VarStatus::AtUpper;
        else if (std::isfinite(p.lower[j])) t.status[j] = VarStatus::AtLower;
        else if (std::isfinite(p.upper[j])) t.status[j] = VarStatus::AtUpper;
        else t.status[j] = VarStatus::FreeAtZero;
    }
    for (int i = 0; i < m; ++i) {
        for (auto [j, coeff] : p.rows[i]) {
            if (j < 0 || j >= n) throw std::invalid_argument("row references unknown variable");
            t.at(i, j) += coeff;
        }
        t.at(i, n + i) = 1.0;  // slack
        t.allowed[n + i] = 1;
        t.rhs[i] = p.rhs[i];
        if (perturb) t.rhs[i] -= kPerturbScale * (1.0 + std::abs(p.rhs[i])) * row_jitter(i);
        t.basis[i] = n + i;
        t.status[n + i] = VarStatus::Basic;
    }
    t.refresh_basic_values();

    // Phase 1: rows whose slack starts negative get an artificial column.
    int num_artificial = 0;
    for (int i = 0; i < m; ++i) {
        if (t.xb[i] >= 0.0) continue;
        const int aj = n + m + num_artificial++;
        artificial_of_row[i] = aj;
        // Row currently reads: sum a_ij x_j + s_i = rhs_i. Flip the row so the
        // artificial enters with +1 and a nonnegative basic value.
        for (int j = 0; j < cols_max; ++j) t.at(i, j) = -t.at(i, j);
        t.rhs[i] = -t.rhs[i];
        t.at(i, aj) = 1.0;
        t.allowed[aj] = 1;
        t.status[n + i] = VarStatus::AtLower;
        t.status[aj] = VarStatus::Basic;
        t.basis[i] = aj;
        t.xb[i] = -t.xb[i];
    }
    t.cols = n + m + num_artificial;  // skip the unused artificial columns

    LpResult result;
    if (num_artificial > 0) {
        std::vector<double> phase1_cost(cols_max, 0.0);
        for (int i = 0; i < m; ++i)
            if (artificial_of_row[i] >= 0) phase1_cost[artificial_of_row[i]] = 1.0;
        t.reset_costs(phase1_cost);
        const LpStatus st = t.iterate(phase1_cost, max_iterations);
        result.iterations = t.pivots;
        if (st == LpStatus::IterationLimit) {
            result.status = st;
            return result;
        }
        t.refresh_basic_values();
        double infeasibility = 0.0;
        for (int i = 0; i < m; ++i)
            if (t.basis[i] >= n + m) infeasibility += std::max(t.xb[i], 0.0);
        if (infeasibility > 1e-9) {
            // The tightened rhs can cut off a thin feasible region; re-run on
            // the exact data so infeasibility reports are never an artifact.
            if (perturb) return solve_lp_impl(p, max_iterations, false);
            result.status = LpStatus::Infeasible;
            result.infeasibility_witness.assign(m, 0.0);
            for (int i = 0; i < m; ++i)
                result.infeasibility_witness[i] = std::max(t.d[n + i], 0.0);
            return result;
        }
        // Drive any artificial still basic (at zero) out of the basis if possible.
        for (int i = 0; i < m; ++i) {
            const int aj = t.basis[i];
            if (aj < n + m) continue;
            for (int j = 0; j < n + m; ++j) {
                if (!t.allowed[j] || t.status[j] == VarStatus::Basic) continue;
                if (std::abs(t.at(i, j)) > 1e-7) {
                    const double piv = t.at(i, j);
                    const double inv = 1.0 / piv;
                    for (int jj = 0; jj < t.cols; ++jj) t.at(i, jj) *= inv;
                    t.rhs[i] *= inv;
                    for (int ii = 0; ii < m; ++ii) {
                        if (ii == i) continue;
                        const double f = t.at(ii, j);
                        if (f == 0.0) continue;
                        for (int jj = 0; jj < t.cols; ++jj) t.at(ii, jj) -= f * t.at(i, jj);
                        t.rhs[ii] -= f * t.rhs[i];
                        t.at(ii, j) = 0.0;
                    }
                    t.status[aj] = VarStatus::AtLower;
                    t.status[j] = VarStatus::Basic;
                    t.basis[i] = j;
                    break;
                }
            }
        }
        for (int i = 0; i < m; ++i)
            if (artificial_of_row[i] >= 0) t.allowed[artificial_of_row[i]] = 0;
        t.refresh_basic_values();
    }

    // Phase 2.
    std::vector<double> cost(cols_max, 0.0);
    for (int j = 0; j < n; ++j) cost[j] = p.objective[j];
    t.reset_costs(cost);
    LpStatus st = t.iterate(cost, max_iterations);

    const auto extract = [&](LpResult& out) {
        t.refresh_basic_values();
        out.x.assign(n, 0.0);
        for (int j = 0; j < n; ++j)
            if (t.status[j] != VarStatus::Basic) out.x[j] = t.nonbasic_value(j);
        for (int i = 0; i < m; ++i)
            if (t.basis[i] < n) out.x[t.basis[i]] = t.xb[i];
        for (int j = 0; j < n; ++j) out.x[j] = std::clamp(out.x[j], p.lower[j], p.upper[j]);
        out.objective = 0.0;
        for (int j = 0; j < n; ++j) out.objective += p.objective[j] * out.x[j];
        out.row_duals.assign(m, 0.0);
        for (int i = 0; i < m; ++i) out.row_duals[i] = std::max(t.d[n + i], 0.0);
    };

    if (st == LpStatus::Optimal && perturb) {
        // Keep the perturbed optimum around: it satisfies the original rows
        // (they were only tightened) and is at most the perturbation's dual
        // value away from optimal, so it is a safe fallback.
        LpResult tightened;
        tightened.status = LpStatus::Optimal;
        extract(tightened);

        // Swap the exact rhs back in. The slack block of the reduced tableau
        // is the basis inverse composed with the phase-1 row signs, and those
        // signs cancel against the ones baked into the stored rows, so the
        // reduced rhs for a new right-hand side is just slack_block * rhs.
        // Reduced costs do not depend on the rhs, so the basis stays dual
        // feasible; a dual simplex sweep restores primal feasibility and a
        // final primal sweep re-verifies optimality.
        std::vector<double> restored(m, 0.0);
        for (int i = 0; i < m; ++i) {
            double v = 0.0;
            for (int j = 0; j < m; ++j) v += t.at(i, n + j) * p.rhs[j];
            restored[i] = v;
        }
        t.rhs = restored;
        t.refresh_basic_values();
        LpStatus cleanup = t.dual_iterate(max_iterations);
        if (cleanup == LpStatus::Optimal) cleanup = t.iterate(cost, max_iterations);
        result.iterations = t.pivots;
        if (cleanup != LpStatus::Optimal) {
            tightened.iterations = t.pivots;
            return tightened;
        }
        result.status = LpStatus::Optimal;
        extract(result);
        return result;
    }

    result.iterations = t.pivots;
    result.status = st;
    if (st != LpStatus::Optimal) return result;
    extract(result);
    return result;
}

}  // namespace

LpResult solve_lp(const LpProblem& p, long max_iterations) {
    return solve_lp_impl(p, max_iterations, true);
}

}  // namespace episafe
