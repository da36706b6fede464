#include "episafe/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace episafe {

namespace {

// Least squares min ||A s - b|| via Householder QR. A is row-major r x c with
// r >= 1, c <= r not required (underdetermined columns are guarded by the
// caller keeping the passive set linearly independent). Returns false when a
// diagonal entry degenerates.
bool least_squares(int r, int c, std::vector<double> A, std::vector<double> b,
                   std::vector<double>& s) {
    auto at = [&](int i, int j) -> double& { return A[static_cast<size_t>(i) * c + j]; };
    for (int k = 0; k < c; ++k) {
        double norm = 0.0;
        for (int i = k; i < r; ++i) norm += at(i, k) * at(i, k);
        norm = std::sqrt(norm);
        if (norm < 1e-13) return false;
        if (at(k, k) > 0.0) norm = -norm;
        for (int i = k; i < r; ++i) at(i, k) /= norm;
        at(k, k) -= 1.0;
        for (int j = k + 1; j < c; ++j) {
            double dot = 0.0;
            for (int i = k; i < r; ++i) dot += at(i, k) * at(i, j);
            dot /= at(k, k);
            for (int i = k; i < r; ++i) at(i, j) += dot * at(i, k);
        }
        double dot = 0.0;
        for (int i = k; i < r; ++i) dot += at(i, k) * b[i];
        dot /= at(k, k);
        for (int i = k; i < r; ++i) b[i] += dot * at(i, k);
        at(k, k) = norm;  // stash R's diagonal
    }
    s.assign(c, 0.0);
    for (int k = c - 1; k >= 0; --k) {
        double v = b[k];
        for (int j = k + 1; j < c; ++j) v -= at(k, j) * s[j];
        s[k] = v / at(k, k);
    }
    return true;
}

}  // namespace

NnlsResult nnls(int rows, int cols, const std::vector<double>& E, const std::vector<double>& f,
                long max_iterations) {
    if (static_cast<int>(E.size()) != rows * cols || static_cast<int>(f.size()) != rows)
        throw std::invalid_argument("inconsistent NNLS dimensions");

    NnlsResult out;
    out.z.assign(cols, 0.0);
    std::vector<char> passive(cols, 0);
    std::vector<double> resid = f;  // f - E z, starts at f
    std::vector<double> w(cols, 0.0);
    std::vector<int> pset;

    auto recompute_residual = [&]() {
        resid = f;
        for (int j = 0; j < cols; ++j) {
            const double zj = out.z[j];
            if (zj == 0.0) continue;
            for (int i = 0; i < rows; ++i) resid[i] -= E[static_cast<size_t>(i) * cols + j] * zj;
        }
    };

    const double tol = 1e-11;
    while (out.iterations < max_iterations) {
        ++out.iterations;
        // Gradient of the active (zero) coordinates.
        double wmax = 0.0;
        int enter = -1;
        for (int j = 0; j < cols; ++j) {
            if (passive[j]) continue;
            double g = 0.0;
            for (int i = 0; i < rows; ++i) g += E[static_cast<size_t>(i) * cols + j] * resid[i];
            w[j] = g;
            if (g > wmax + tol) {
                wmax = g;
                enter = j;
            }
        }
        if (enter < 0 || static_cast<int>(pset.size()) == std::min(rows, cols)) {
            out.converged = true;
            break;
        }
        passive[enter] = 1;
        pset.push_back(enter);

        // Inner loop: restrict to the passive set, back off along the segment
        // toward the unconstrained minimizer until all passive z stay positive.
        while (true) {
            const int np = static_cast<int>(pset.size());
            std::vector<double> Ap(static_cast<size_t>(rows) * np);
            for (int i = 0; i < rows; ++i)
                for (int jj = 0; jj < np; ++jj)
                    Ap[static_cast<size_t>(i) * np + jj] = E[static_cast<size_t>(i) * cols + pset[jj]];
            std::vector<double> s;
            if (!least_squares(rows, np, Ap, f, s)) {
                // Degenerate column: reject the most recent entrant.
                passive[pset.back()] = 0;
                pset.pop_back();
                w[enter] = 0.0;
                break;
            }
            bool all_positive = true;
            for (int jj = 0; jj < np; ++jj)
                if (s[jj] <= tol) { all_positive = false; break; }
            if (all_positive) {
                for (int j = 0; j < cols; ++j) out.z[j] = 0.0;
                for (int jj = 0; jj < np; ++jj) out.z[pset[jj]] = s[jj];
                break;
            }
            double alpha = std::numeric_limits<double>::infinity();
            for (int jj = 0; jj < np; ++jj) {
                if (s[jj] > tol) continue;
                const double zj = out.z[pset[jj]];
                const double a = zj / (zj - s[jj]);
                alpha = std::min(alpha, a);
            }
            alpha = std::clamp(alpha, 0.0, 1.0);
            for (int jj = 0; jj < np; ++jj) {
                const int j = pset[jj];
                out.z[j] += alpha * (s[jj] - out.z[j]);
            }
            for (int jj = static_cast<int>(pset.size()) - 1; jj >= 0; --jj) {
                const int j = pset[jj];
                if (out.z[j] <= tol) {
                    out.z[j] = 0.0;
                    passive[j] = 0;
                    pset.erase(pset.begin() + jj);
                }
            }
            if (++out.iterations >= max_iterations) break;
        }
        recompute_residual();
    }

    recompute_residual();
    double rn = 0.0;
    for (double v : resid) rn += v * v;
    out.residual_norm = std::sqrt(rn);
    return out;
}

LdpResult solve_ldp(int num_rows, int dim, const std::vector<double>& G,
                    const std::vector<double>& h, long max_iterations) {
    if (static_cast<int>(G.size()) != num_rows * dim || static_cast<int>(h.size()) != num_rows)
        throw std::invalid_argument("inconsistent LDP dimensions");

    // Stack [G^T; h^T] as the NNLS matrix and aim at the last unit vector.
    const int er = dim + 1;
    std::vector<double> E(static_cast<size_t>(er) * num_rows, 0.0);
    for (int i = 0; i < num_rows; ++i)
        for (int j = 0; j < dim; ++j)
            E[static_cast<size_t>(j) * num_rows + i] = G[static_cast<size_t>(i) * dim + j];
    for (int i = 0; i < num_rows; ++i) E[static_cast<size_t>(dim) * num_rows + i] = h[i];
    std::vector<double> f(er, 0.0);
    f[dim] = 1.0;

    const NnlsResult base = nnls(er, num_rows, E, f, max_iterations);

    LdpResult out;
    out.iterations = base.iterations;
    out.converged = base.converged;
    if (base.residual_norm <= 1e-10) {
        // The target is reachable: G^T z ~ 0 and h^T z ~ 1 with z >= 0, which
        // is a certificate that {y : G y >= h} is empty.
        out.feasible = false;
        out.farkas = base.z;
        return out;
    }

    std::vector<double> resid(er, 0.0);
    for (int i = 0; i < er; ++i) {
        double v = -f[i];
        for (int j = 0; j < num_rows; ++j)
            v += E[static_cast<size_t>(i) * num_rows + j] * base.z[j];
        resid[i] = v;
    }
    const double denom = resid[dim];
    if (std::abs(denom) < 1e-14) {
        out.feasible = false;
        out.farkas = base.z;
        return out;
    }
    out.feasible = true;
    out.y.assign(dim, 0.0);
    for (int j = 0; j < dim; ++j) out.y[j] = -resid[j] / denom;
    const double rsq = base.residual_norm * base.residual_norm;
    out.multipliers.assign(num_rows, 0.0);
    for (int i = 0; i < num_rows; ++i) out.multipliers[i] = base.z[i] / rsq;
    return out;
}

}  // namespace episafe
