#include "episafe/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "episafe/errors.hpp"
#include "episafe/nnls.hpp"
#include "episafe/simplex.hpp"

namespace episafe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSnapTol = 1e-12;

int parameter_count(const IsingModel& m) {
    return m.graph().edge_count() + m.node_count();
}

std::vector<double> parameter_vector(const IsingModel& m) {
    const int ne = m.graph().edge_count();
    std::vector<double> theta(ne + m.node_count());
    for (int e = 0; e < ne; ++e) theta[e] = m.coupling(e);
    for (int v = 0; v < m.node_count(); ++v) theta[ne + v] = m.field(v);
    return theta;
}

void validate_norm(const NormSpec& norm, int num_params) {
    if (!(norm.l1_weight >= 0.0) || !std::isfinite(norm.l1_weight) ||
        !(norm.l2_weight >= 0.0) || !std::isfinite(norm.l2_weight))
        throw std::invalid_argument("norm term weights must be finite and nonnegative");
    if (norm.l1_weight + norm.l2_weight <= 0.0)
        throw std::invalid_argument("at least one norm term weight must be positive");
    if (!norm.variable_weights.empty()) {
        if (static_cast<int>(norm.variable_weights.size()) != num_params)
            throw std::invalid_argument("variable_weights length must match parameter count");
        for (double w : norm.variable_weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw std::invalid_argument("variable weights must be positive and finite");
    }
}

double weight_of(const NormSpec& norm, int param) {
    return norm.variable_weights.empty() ? 1.0 : norm.variable_weights[param];
}

// Projection instance rewritten over the change variables of the adjustable
// parameters only; frozen parameters are folded into each row's rhs.
struct DeltaSpace {
    std::vector<int> vars;        // adjustable id -> parameter index
    std::vector<double> theta0;   // full baseline parameter vector
    std::vector<double> lo, hi;   // bounds on the change, per adjustable id
    std::vector<double> weight;   // norm weight per adjustable id
    std::vector<std::vector<std::pair<int, double>>> rows;  // per constraint
    std::vector<double> rhs;      // row i satisfied iff sum row_i * delta <= rhs[i]
    double alpha = 0.0;           // l1 term weight
    double beta = 0.0;            // l2 term weight
};

DeltaSpace build_delta_space(const PreventionProblem& p, double safety_margin) {
    const int ne = p.baseline.graph().edge_count();
    const int np = parameter_count(p.baseline);
    if (static_cast<int>(p.adjustable.size()) != np ||
        static_cast<int>(p.lower.size()) != np || static_cast<int>(p.upper.size()) != np)
        throw std::invalid_argument("adjustable/lower/upper must cover every parameter");
    validate_norm(p.norm, np);

    DeltaSpace d;
    d.alpha = p.norm.l1_weight;
    d.beta = p.norm.l2_weight;
    d.theta0 = parameter_vector(p.baseline);
    std::vector<int> param_to_adj(np, -1);
    for (int j = 0; j < np; ++j) {
        if (!p.adjustable[j]) continue;
        if (p.lower[j] > p.upper[j])
            throw std::invalid_argument("parameter bound lower > upper");
        if (j < ne && p.lower[j] < 0.0)
            throw std::invalid_argument("coupling lower bounds must be nonnegative");
        param_to_adj[j] = static_cast<int>(d.vars.size());
        d.vars.push_back(j);
        d.lo.push_back(p.lower[j] - d.theta0[j]);
        d.hi.push_back(p.upper[j] - d.theta0[j]);
        d.weight.push_back(weight_of(p.norm, j));
    }

    d.rows.resize(p.constraints.size());
    d.rhs.resize(p.constraints.size());
    for (size_t i = 0; i < p.constraints.size(); ++i) {
        const SafetyConstraint& c = p.constraints[i];
        double lhs0 = 0.0;
        auto add = [&](int param, double coeff) {
            lhs0 += coeff * d.theta0[param];
            const int k = param_to_adj[param];
            if (k >= 0) d.rows[i].emplace_back(k, coeff);
        };
        for (auto [e, coeff] : c.edge_coeffs) add(e, coeff);
        for (auto [v, coeff] : c.node_coeffs) add(ne + v, coeff);
        d.rhs[i] = c.rhs - lhs0 - safety_margin * (1.0 + std::abs(c.rhs - lhs0));
    }
    return d;
}

struct SubSolve {
    std::vector<double> delta;  // per adjustable id
    long iterations = 0;
    double gap = 0.0;
    const char* method = "";
};

[[noreturn]] void throw_infeasible(const std::vector<int>& active,
                                   const std::vector<double>& row_weights) {
    std::vector<int> idx;
    std::vector<double> wts;
    for (size_t r = 0; r < active.size() && r < row_weights.size(); ++r) {
        if (row_weights[r] > 1e-12) {
            idx.push_back(active[r]);
            wts.push_back(row_weights[r]);
        }
    }
    throw infeasible_error(
        "no parameter change within bounds satisfies the safety constraints", std::move(idx),
        std::move(wts));
}

// --- pure l1: bounded-variable LP over split change variables -------------

SubSolve solve_l1(const DeltaSpace& d, const std::vector<int>& active,
                  const SolverOptions& opt) {
    const int nv = static_cast<int>(d.vars.size());
    LpProblem lp;
    lp.num_vars = 2 * nv;
    lp.objective.assign(lp.num_vars, 0.0);
    lp.lower.assign(lp.num_vars, 0.0);
    lp.upper.assign(lp.num_vars, 0.0);
    // Start every decrease variable at its upper bound: safety rows have
    // nonnegative coefficients, so the largest admissible reduction is a
    // feasible corner whenever the instance is feasible at all, and the
    // simplex can skip its feasibility phase.
    lp.start_at_upper.assign(lp.num_vars, 0);
    for (int k = 0; k < nv; ++k) {
        lp.objective[2 * k] = lp.objective[2 * k + 1] = d.alpha * d.weight[k];
        lp.lower[2 * k] = std::max(0.0, d.lo[k]);
        lp.upper[2 * k] = std::max(0.0, d.hi[k]);
        lp.lower[2 * k + 1] = std::max(0.0, -d.hi[k]);
        lp.upper[2 * k + 1] = std::max(0.0, -d.lo[k]);
        lp.start_at_upper[2 * k + 1] = 1;
    }
    lp.rows.reserve(active.size());
    lp.rhs.reserve(active.size());
    for (int ci : active) {
        std::vector<std::pair<int, double>> row;
        row.reserve(2 * d.rows[ci].size());
        for (auto [k, coeff] : d.rows[ci]) {
            row.emplace_back(2 * k, coeff);
            row.emplace_back(2 * k + 1, -coeff);
        }
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(d.rhs[ci]);
    }

    const LpResult res = solve_lp(lp, opt.max_iterations);
    if (res.status == LpStatus::Infeasible) throw_infeasible(active, res.infeasibility_witness);
    if (res.status != LpStatus::Optimal)
        throw convergence_error("l1 projection did not reach an optimal basis", kInf, kInf,
                                res.iterations);

    SubSolve out;
    out.method = "simplex";
    out.iterations = res.iterations;
    out.delta.assign(nv, 0.0);
    for (int k = 0; k < nv; ++k) out.delta[k] = res.x[2 * k] - res.x[2 * k + 1];

    // Certified lower bound from the row duals; see the weak-duality identity
    // for box-constrained LPs: L(y) = -y^T b + sum_j min over the box of
    // (c + A^T y)_j v_j.
    double lower_bound = 0.0;
    std::vector<double> g = lp.objective;
    for (size_t r = 0; r < lp.rows.size(); ++r) {
        lower_bound -= res.row_duals[r] * lp.rhs[r];
        for (auto [j, coeff] : lp.rows[r]) g[j] += res.row_duals[r] * coeff;
    }
    for (int j = 0; j < lp.num_vars; ++j) {
        double gj = g[j];
        if (!std::isfinite(lp.upper[j])) gj = std::max(gj, 0.0);
        const double at_lo = gj * lp.lower[j];
        const double at_up = std::isfinite(lp.upper[j]) ? gj * lp.upper[j] : at_lo;
        lower_bound += std::min(at_lo, at_up);
    }
    out.gap = std::max(0.0, res.objective - lower_bound);
    return out;
}

// --- pure l2: least distance programming in rescaled coordinates ----------

SubSolve solve_l2(const DeltaSpace& d, const std::vector<int>& active,
                  const SolverOptions& opt) {
    const int nv = static_cast<int>(d.vars.size());
    std::vector<double> sw(nv);
    for (int k = 0; k < nv; ++k) sw[k] = std::sqrt(d.weight[k]);

    // Rows of G y >= h: negated safety rows first, then finite bounds.
    std::vector<double> G;
    std::vector<double> h;
    auto push_row = [&](const std::vector<std::pair<int, double>>& entries, double rhs) {
        const size_t base = G.size();
        G.resize(base + nv, 0.0);
        for (auto [k, coeff] : entries) G[base + k] += coeff;
        h.push_back(rhs);
    };
    for (int ci : active) {
        std::vector<std::pair<int, double>> row;
        for (auto [k, coeff] : d.rows[ci]) row.emplace_back(k, -coeff / sw[k]);
        push_row(row, -d.rhs[ci]);
    }
    const int num_safety = static_cast<int>(active.size());
    for (int k = 0; k < nv; ++k) {
        if (std::isfinite(d.hi[k])) push_row({{k, -1.0}}, -sw[k] * d.hi[k]);
        if (std::isfinite(d.lo[k])) push_row({{k, +1.0}}, sw[k] * d.lo[k]);
    }
    const int rows = static_cast<int>(h.size());

    const LdpResult res = solve_ldp(rows, nv, G, h, opt.max_iterations);
    if (!res.feasible) throw_infeasible(active, res.farkas);
    if (!res.converged)
        throw convergence_error("l2 projection did not converge", kInf, kInf, res.iterations);

    SubSolve out;
    out.method = "nnls";
    out.iterations = res.iterations;
    out.delta.assign(nv, 0.0);
    for (int k = 0; k < nv; ++k) out.delta[k] = res.y[k] / sw[k];

    // Primal-dual gap on the quadratic form 0.5*||y||^2 with multipliers from
    // the active set: L(lam) = lam^T h - 0.5*||G^T lam||^2.
    double primal = 0.0;
    for (double v : res.y) primal += v * v;
    primal *= 0.5;
    std::vector<double> gtl(nv, 0.0);
    double lam_h = 0.0;
    for (int r = 0; r < rows; ++r) {
        const double lam = std::max(0.0, res.multipliers[r]);
        if (lam == 0.0) continue;
        lam_h += lam * h[r];
        for (int k = 0; k < nv; ++k) gtl[k] += lam * G[static_cast<size_t>(r) * nv + k];
    }
    double gtl_sq = 0.0;
    for (double v : gtl) gtl_sq += v * v;
    const double dual = lam_h - 0.5 * gtl_sq;
    out.gap = std::max(0.0, (primal - dual) / std::max(1.0, primal));
    (void)num_safety;
    return out;
}

// --- mixed norm: primal-dual hybrid gradient with a certified gap ---------

struct MixedRows {
    int nv = 0;
    int rows = 0;
    std::vector<double> K;  // row-major rows x nv, constraint form K y <= c
    std::vector<double> c;
    int num_safety = 0;
};

MixedRows build_mixed_rows(const DeltaSpace& d, const std::vector<int>& active,
                           const std::vector<double>& sw) {
    MixedRows mr;
    mr.nv = static_cast<int>(d.vars.size());
    auto push_row = [&](const std::vector<std::pair<int, double>>& entries, double rhs) {
        const size_t base = mr.K.size();
        mr.K.resize(base + mr.nv, 0.0);
        for (auto [k, coeff] : entries) mr.K[base + k] += coeff;
        mr.c.push_back(rhs);
        ++mr.rows;
    };
    for (int ci : active) {
        std::vector<std::pair<int, double>> row;
        for (auto [k, coeff] : d.rows[ci]) row.emplace_back(k, coeff / sw[k]);
        push_row(row, d.rhs[ci]);
    }
    mr.num_safety = static_cast<int>(active.size());
    for (int k = 0; k < mr.nv; ++k) {
        if (std::isfinite(d.hi[k])) push_row({{k, +1.0}}, sw[k] * d.hi[k]);
        if (std::isfinite(d.lo[k])) push_row({{k, -1.0}}, -sw[k] * d.lo[k]);
    }
    return mr;
}

double operator_norm(const MixedRows& mr) {
    std::vector<double> v(mr.nv, 1.0 / std::sqrt(static_cast<double>(std::max(1, mr.nv))));
    std::vector<double> u(mr.rows, 0.0);
    double sigma = 1.0;
    for (int it = 0; it < 40; ++it) {
        for (int r = 0; r < mr.rows; ++r) {
            double s = 0.0;
            for (int k = 0; k < mr.nv; ++k) s += mr.K[static_cast<size_t>(r) * mr.nv + k] * v[k];
            u[r] = s;
        }
        std::vector<double> next(mr.nv, 0.0);
        for (int r = 0; r < mr.rows; ++r)
            for (int k = 0; k < mr.nv; ++k)
                next[k] += mr.K[static_cast<size_t>(r) * mr.nv + k] * u[r];
        double nn = 0.0;
        for (double x : next) nn += x * x;
        nn = std::sqrt(nn);
        if (nn <= 1e-300) return 1.0;
        sigma = std::sqrt(nn);
        for (int k = 0; k < mr.nv; ++k) v[k] = next[k] / nn;
    }
    return sigma * 1.02 + 1e-12;
}

SubSolve solve_mixed(const DeltaSpace& d, const std::vector<int>& active,
                     const SolverOptions& opt) {
    const int nv = static_cast<int>(d.vars.size());
    std::vector<double> sw(nv);
    for (int k = 0; k < nv; ++k) sw[k] = std::sqrt(d.weight[k]);
    const MixedRows mr = build_mixed_rows(d, active, sw);
    std::vector<double> l1w(nv);
    for (int k = 0; k < nv; ++k) l1w[k] = d.alpha * sw[k];

    // Interior anchor via an auxiliary LP: minimize the worst violation t.
    // Used both as an infeasibility test and to repair iterates to strict
    // feasibility before measuring the duality gap.
    std::vector<double> anchor(nv, 0.0);
    {
        LpProblem lp;
        lp.num_vars = nv + 1;
        lp.objective.assign(nv + 1, 0.0);
        lp.objective[nv] = 1.0;
        lp.lower.assign(nv + 1, -kInf);
        lp.upper.assign(nv + 1, kInf);
        for (int k = 0; k < nv; ++k) {
            lp.lower[k] = std::isfinite(d.lo[k]) ? sw[k] * d.lo[k] : -kInf;
            lp.upper[k] = std::isfinite(d.hi[k]) ? sw[k] * d.hi[k] : kInf;
        }
        lp.lower[nv] = -1e3;
        for (int r = 0; r < mr.num_safety; ++r) {
            std::vector<std::pair<int, double>> row;
            for (int k = 0; k < nv; ++k) {
                const double a = mr.K[static_cast<size_t>(r) * nv + k];
                if (a != 0.0) row.emplace_back(k, a);
            }
            row.emplace_back(nv, -1.0);
            lp.rows.push_back(std::move(row));
            lp.rhs.push_back(mr.c[r]);
        }
        const LpResult res = solve_lp(lp, opt.max_iterations);
        if (res.status != LpStatus::Optimal)
            throw convergence_error("mixed projection could not locate an anchor point", kInf,
                                    kInf, res.iterations);
        if (res.objective > opt.feasibility_tol) throw_infeasible(active, res.row_duals);
        for (int k = 0; k < nv; ++k) anchor[k] = res.x[k];
    }
    std::vector<double> anchor_rows(mr.rows, 0.0);
    for (int r = 0; r < mr.rows; ++r) {
        double s = -mr.c[r];
        for (int k = 0; k < nv; ++k) s += mr.K[static_cast<size_t>(r) * nv + k] * anchor[k];
        anchor_rows[r] = s;  // <= max(0, anchor margin)
    }

    const double L = operator_norm(mr);
    const double tau = 1.0 / L;
    const double sigma = 1.0 / L;

    std::vector<double> y(nv, 0.0), ybar(nv, 0.0), yprev(nv, 0.0);
    std::vector<double> lam(mr.rows, 0.0);
    std::vector<double> ky(mr.rows, 0.0), ktl(nv, 0.0);

    auto prox_primal = [&](std::vector<double>& v) {
        // Soft-threshold per coordinate, then shrink the whole block; this is
        // the proximal map of the weighted l1 term plus the l2-norm term.
        for (int k = 0; k < nv; ++k) {
            const double t = tau * l1w[k];
            v[k] = v[k] > t ? v[k] - t : (v[k] < -t ? v[k] + t : 0.0);
        }
        if (d.beta > 0.0) {
            double nrm = 0.0;
            for (double x : v) nrm += x * x;
            nrm = std::sqrt(nrm);
            const double t = tau * d.beta;
            const double scale = nrm > t ? (nrm - t) / nrm : 0.0;
            for (double& x : v) x *= scale;
        }
    };
    auto objective_of = [&](const std::vector<double>& v) {
        double l1 = 0.0, sq = 0.0;
        for (int k = 0; k < nv; ++k) {
            l1 += l1w[k] * std::abs(v[k]);
            sq += v[k] * v[k];
        }
        return l1 + d.beta * std::sqrt(sq);
    };
    auto repair = [&](const std::vector<double>& v, std::vector<double>& out_rows) {
        // Pull toward the anchor just enough to clear every violated row.
        out_rows.assign(mr.rows, 0.0);
        double theta = 0.0;
        for (int r = 0; r < mr.rows; ++r) {
            double s = -mr.c[r];
            for (int k = 0; k < nv; ++k) s += mr.K[static_cast<size_t>(r) * nv + k] * v[k];
            out_rows[r] = s;
            if (s > 0.0 && s - anchor_rows[r] > 0.0)
                theta = std::max(theta, s / (s - anchor_rows[r]));
        }
        theta = std::min(theta, 1.0);
        std::vector<double> out = v;
        if (theta > 0.0)
            for (int k = 0; k < nv; ++k) out[k] = v[k] + theta * (anchor[k] - v[k]);
        return out;
    };
    auto dual_bound = [&]() {
        // Scale the multipliers down until the shrunk gradient fits inside the
        // l2-ball of radius beta, then read off -c^T lam.
        double lo_s = 0.0, hi_s = 1.0;
        auto fits = [&](double s) {
            double nrm = 0.0;
            for (int k = 0; k < nv; ++k) {
                double v = s * ktl[k];
                const double t = l1w[k];
                v = v > t ? v - t : (v < -t ? v + t : 0.0);
                nrm += v * v;
            }
            return std::sqrt(nrm) <= d.beta + 1e-15;
        };
        if (!fits(0.0)) return 0.0;
        double s = 1.0;
        if (!fits(1.0)) {
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo_s + hi_s);
                if (fits(mid)) lo_s = mid; else hi_s = mid;
            }
            s = lo_s;
        }
        double ctl = 0.0;
        for (int r = 0; r < mr.rows; ++r) ctl += mr.c[r] * lam[r];
        return std::max(0.0, -s * ctl);
    };

    SubSolve out;
    out.method = "pdhg";
    std::vector<double> row_vals;
    double best_obj = kInf;
    std::vector<double> best_y = repair(y, row_vals);
    best_obj = objective_of(best_y);

    for (long it = 1; it <= opt.max_iterations; ++it) {
        ++out.iterations;
        for (int r = 0; r < mr.rows; ++r) {
            double s = 0.0;
            for (int k = 0; k < nv; ++k) s += mr.K[static_cast<size_t>(r) * nv + k] * ybar[k];
            lam[r] = std::max(0.0, lam[r] + sigma * (s - mr.c[r]));
        }
        ktl.assign(nv, 0.0);
        for (int r = 0; r < mr.rows; ++r) {
            if (lam[r] == 0.0) continue;
            for (int k = 0; k < nv; ++k)
                ktl[k] += mr.K[static_cast<size_t>(r) * nv + k] * lam[r];
        }
        yprev = y;
        for (int k = 0; k < nv; ++k) y[k] -= tau * ktl[k];
        prox_primal(y);
        for (int k = 0; k < nv; ++k) ybar[k] = 2.0 * y[k] - yprev[k];

        if (it % 64 == 0 || it == opt.max_iterations) {
            std::vector<double> yr = repair(y, row_vals);
            const double obj = objective_of(yr);
            if (obj < best_obj) {
                best_obj = obj;
                best_y = yr;
            }
            const double bound = dual_bound();
            out.gap = std::max(0.0, (best_obj - bound) / std::max(1.0, best_obj));
            if (out.gap <= opt.optimality_tol) break;
        }
    }
    if (out.gap > opt.optimality_tol)
        throw convergence_error("mixed projection gap above tolerance", 0.0, out.gap,
                                out.iterations);

    out.delta.assign(nv, 0.0);
    for (int k = 0; k < nv; ++k) out.delta[k] = best_y[k] / sw[k];
    return out;
}

IsingModel apply_delta(const PreventionProblem& p, const DeltaSpace& d,
                       const std::vector<double>& delta) {
    const int ne = p.baseline.graph().edge_count();
    std::vector<double> theta = d.theta0;
    for (size_t k = 0; k < d.vars.size(); ++k) {
        const int j = d.vars[k];
        const double dv = std::clamp(delta[k], d.lo[k], d.hi[k]);
        double v = d.theta0[j] + dv;
        v = std::clamp(v, p.lower[j], p.upper[j]);
        if (std::abs(v - d.theta0[j]) <= kSnapTol) v = d.theta0[j];
        theta[j] = v;
    }
    std::vector<double> J(theta.begin(), theta.begin() + ne);
    std::vector<double> h(theta.begin() + ne, theta.end());
    return p.baseline.with_parameters(std::move(J), std::move(h));
}

}  // namespace

PreventionProblem make_prevention_problem(IsingModel baseline,
                                          std::vector<SafetyConstraint> constraints,
                                          NormSpec norm) {
    const int ne = baseline.graph().edge_count();
    const int nn = baseline.node_count();
    PreventionProblem p(std::move(baseline));
    p.constraints = std::move(constraints);
    p.norm = std::move(norm);
    p.adjustable.assign(ne + nn, 0);
    p.lower.resize(ne + nn);
    p.upper.resize(ne + nn);
    for (int e = 0; e < ne; ++e) {
        p.adjustable[e] = 1;
        p.lower[e] = 0.0;
        p.upper[e] = p.baseline.coupling(e);
    }
    for (int v = 0; v < nn; ++v) {
        p.lower[ne + v] = p.upper[ne + v] = p.baseline.field(v);
    }
    return p;
}

double intervention_cost(const IsingModel& baseline, const IsingModel& corrected,
                         const NormSpec& norm) {
    const Graph& ga = baseline.graph();
    const Graph& gb = corrected.graph();
    if (ga.node_count() != gb.node_count() || ga.edge_count() != gb.edge_count())
        throw std::invalid_argument("models must share a graph");
    for (int e = 0; e < ga.edge_count(); ++e)
        if (ga.edges()[e].u != gb.edges()[e].u || ga.edges()[e].v != gb.edges()[e].v)
            throw std::invalid_argument("models must share a graph");
    const int np = parameter_count(baseline);
    validate_norm(norm, np);
    const std::vector<double> a = parameter_vector(baseline);
    const std::vector<double> b = parameter_vector(corrected);
    double l1 = 0.0, sq = 0.0;
    for (int j = 0; j < np; ++j) {
        const double w = weight_of(norm, j);
        const double diff = b[j] - a[j];
        l1 += w * std::abs(diff);
        sq += w * diff * diff;
    }
    return norm.l1_weight * l1 + norm.l2_weight * std::sqrt(sq);
}

PreventionSolution project_to_safe(const PreventionProblem& problem,
                                   const SolverOptions& options) {
    const DeltaSpace d = build_delta_space(problem, options.safety_margin);
    const int m = static_cast<int>(problem.constraints.size());

    std::vector<double> residual0(m, 0.0);
    double worst0 = 0.0;
    for (int i = 0; i < m; ++i) {
        residual0[i] = problem.constraints[i].residual(problem.baseline);
        worst0 = std::max(worst0, residual0[i]);
    }
    if (worst0 <= options.feasibility_tol) {
        PreventionSolution sol(problem.baseline);
        sol.constraint_slack = residual0;
        sol.baseline_already_safe = true;
        sol.stats.method = "baseline";
        sol.stats.feasibility_residual = std::max(0.0, worst0);
        return sol;
    }

    // A row only counts as settled once it clears half its safety margin;
    // otherwise a constraint the subproblem never saw could end up satisfied
    // merely to rounding accuracy, which is exactly what the margin exists to
    // rule out.
    std::vector<double> settle_slack(m, 0.0);
    for (int i = 0; i < m; ++i)
        settle_slack[i] = -0.5 * options.safety_margin * (1.0 + std::abs(residual0[i]));

    // Working set: worst offenders first, capped per round to keep the dense
    // subproblems small; anything still violated re-enters on a later round.
    constexpr int kMaxAdmitted = 500;
    std::vector<int> admit_count(m, 0);
    auto admit = [&](std::vector<int>& work, const std::vector<double>& residual,
                     const std::vector<char>& skip) {
        std::vector<int> candidates;
        for (int i = 0; i < m; ++i)
            if (!skip[i] && residual[i] > settle_slack[i]) candidates.push_back(i);
        std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            if (residual[a] != residual[b]) return residual[a] > residual[b];
            return a < b;
        });
        if (candidates.size() > kMaxAdmitted) candidates.resize(kMaxAdmitted);
        for (int i : candidates) ++admit_count[i];
        work.insert(work.end(), candidates.begin(), candidates.end());
        std::sort(work.begin(), work.end());
        return !candidates.empty();
    };

    std::vector<int> active;
    admit(active, residual0, std::vector<char>(m, 0));

    const bool pure_l1 = d.beta == 0.0;
    const bool pure_l2 = d.alpha == 0.0;

    long total_iterations = 0;
    for (int round = 1; round <= options.max_lazy_rounds; ++round) {
        SubSolve sub;
        if (pure_l1) sub = solve_l1(d, active, options);
        else if (pure_l2) sub = solve_l2(d, active, options);
        else sub = solve_mixed(d, active, options);
        total_iterations += sub.iterations;

        IsingModel corrected = apply_delta(problem, d, sub.delta);
        std::vector<double> slack(m, 0.0);
        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            slack[i] = problem.constraints[i].residual(corrected);
            worst = std::max(worst, slack[i]);
        }
        std::vector<int> previous = active;

        // Rows pushed strictly inside (beyond twice their margin) no longer
        // shape the solution; drop them so the subproblem tracks the binding
        // set instead of growing every round. A row that has re-entered once
        // already stays for good, which rules out admit/drop oscillation.
        std::vector<int> kept;
        kept.reserve(active.size());
        for (int i : active)
            if (admit_count[i] >= 2 || slack[i] >= 4.0 * settle_slack[i]) kept.push_back(i);
        active = std::move(kept);

        std::vector<char> in_active(m, 0);
        for (int i : active) in_active[i] = 1;
        const bool added = admit(active, slack, in_active);

        if (!added) {
            if (worst > options.feasibility_tol)
                throw convergence_error("projection left active constraints violated", worst,
                                        sub.gap, total_iterations);
            PreventionSolution sol(std::move(corrected));
            sol.cost = intervention_cost(problem.baseline, sol.corrected, problem.norm);
            sol.constraint_slack = std::move(slack);
            sol.stats.method = sub.method;
            sol.stats.iterations = total_iterations;
            sol.stats.feasibility_residual = std::max(0.0, worst);
            sol.stats.optimality_gap = sub.gap;
            sol.stats.active_constraints = static_cast<int>(previous.size());
            sol.stats.lazy_rounds = round;
            if (sub.gap > options.optimality_tol)
                throw convergence_error("projection optimality gap above tolerance", worst,
                                        sub.gap, total_iterations);
            return sol;
        }
    }
    throw convergence_error("lazy constraint loop exceeded its round budget", kInf, kInf,
                            total_iterations);
}

}  // namespace episafe
