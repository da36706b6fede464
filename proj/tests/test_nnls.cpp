#include <cmath>
#include <vector>

#include "doctest.h"
#include "episafe/nnls.hpp"
#include "episafe/rng.hpp"

using namespace episafe;

namespace {

// Residual r = E z - f and the KKT conditions for min ||E z - f|| over z >= 0:
// gradient g = E^T r must satisfy g_j >= 0 everywhere and g_j ~ 0 where z_j > 0.
void check_nnls_kkt(int rows, int cols, const std::vector<double>& E,
                    const std::vector<double>& f, const std::vector<double>& z,
                    double tol) {
    std::vector<double> r(rows, 0.0);
    for (int i = 0; i < rows; ++i) {
        double v = -f[i];
        for (int j = 0; j < cols; ++j) v += E[static_cast<size_t>(i) * cols + j] * z[j];
        r[i] = v;
    }
    for (int j = 0; j < cols; ++j) {
        REQUIRE(z[j] >= 0.0);
        double g = 0.0;
        for (int i = 0; i < rows; ++i) g += E[static_cast<size_t>(i) * cols + j] * r[i];
        CHECK(g >= -tol);
        if (z[j] > tol) CHECK(std::abs(g) <= tol);
    }
}

}  // namespace

TEST_SUITE("nnls") {
    TEST_CASE("clips the sign-constrained coordinate") {
        // E = I, f = (1, -2): unconstrained solution (1, -2), nonnegative
        // answer clamps the second coordinate.
        NnlsResult r = nnls(2, 2, {1, 0, 0, 1}, {1, -2});
        REQUIRE(r.converged);
        CHECK(r.z[0] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(r.z[1] == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(r.residual_norm == doctest::Approx(2.0).epsilon(1e-10));
    }

    TEST_CASE("reproduces the unconstrained optimum when it is nonnegative") {
        // Rows of E chosen so E^T E is well conditioned; f = E * (2, 0.5).
        std::vector<double> E{1, 0, 0, 1, 1, 1};
        std::vector<double> f{2.0, 0.5, 2.5};
        NnlsResult r = nnls(3, 2, E, f);
        REQUIRE(r.converged);
        CHECK(r.z[0] == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(r.z[1] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(r.residual_norm == doctest::Approx(0.0).epsilon(1e-9));
    }

    TEST_CASE("random overdetermined systems satisfy the optimality conditions") {
        CounterRng rng(0xAB);
        for (int trial = 0; trial < 100; ++trial) {
            CounterRng sub = rng.derive(trial);
            const int rows = 6, cols = 4;
            std::vector<double> E(rows * cols), f(rows);
            for (auto& v : E) v = sub.uniform(-1.0, 1.0);
            for (auto& v : f) v = sub.uniform(-1.0, 1.0);
            NnlsResult r = nnls(rows, cols, E, f);
            CAPTURE(trial);
            REQUIRE(r.converged);
            check_nnls_kkt(rows, cols, E, f, r.z, 1e-8);

            double rn = 0.0;
            for (int i = 0; i < rows; ++i) {
                double v = -f[i];
                for (int j = 0; j < cols; ++j) v += E[static_cast<size_t>(i) * cols + j] * r.z[j];
                rn += v * v;
            }
            CHECK(r.residual_norm == doctest::Approx(std::sqrt(rn)).epsilon(1e-9));
        }
    }
}

TEST_SUITE("ldp") {
    TEST_CASE("projects the origin onto a half-plane") {
        // y_0 + y_1 >= 2: nearest point to the origin is (1, 1).
        LdpResult r = solve_ldp(1, 2, {1, 1}, {2});
        REQUIRE(r.converged);
        REQUIRE(r.feasible);
        CHECK(r.y[0] == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(r.y[1] == doctest::Approx(1.0).epsilon(1e-8));
        // Stationarity y = G^T lambda with lambda >= 0.
        REQUIRE(r.multipliers.size() == 1);
        CHECK(r.multipliers[0] == doctest::Approx(1.0).epsilon(1e-6));
    }

    TEST_CASE("already-feasible origin is returned unchanged") {
        LdpResult r = solve_ldp(2, 2, {1, 0, 0, 1}, {-1, -1});  // y >= -1 componentwise
        REQUIRE(r.feasible);
        CHECK(std::abs(r.y[0]) <= 1e-9);
        CHECK(std::abs(r.y[1]) <= 1e-9);
    }

    TEST_CASE("random feasible systems satisfy stationarity and complementarity") {
        CounterRng rng(0x1D9);
        for (int trial = 0; trial < 100; ++trial) {
            CounterRng sub = rng.derive(trial);
            const int m = 4, dim = 3;
            std::vector<double> G(m * dim), h(m);
            for (auto& v : G) v = sub.uniform(-1.0, 1.0);
            // Make each row satisfiable at the random anchor point a.
            std::vector<double> a(dim);
            for (auto& v : a) v = sub.uniform(-1.0, 1.0);
            for (int i = 0; i < m; ++i) {
                double ga = 0.0;
                for (int j = 0; j < dim; ++j) ga += G[static_cast<size_t>(i) * dim + j] * a[j];
                h[i] = ga - sub.uniform(0.0, 0.5);  // slack at a, so feasible
            }
            LdpResult r = solve_ldp(m, dim, G, h);
            CAPTURE(trial);
            REQUIRE(r.converged);
            REQUIRE(r.feasible);

            for (int i = 0; i < m; ++i) {
                double gy = 0.0;
                for (int j = 0; j < dim; ++j) gy += G[static_cast<size_t>(i) * dim + j] * r.y[j];
                CHECK(gy >= h[i] - 1e-7);  // primal feasibility
                CHECK(r.multipliers[i] >= -1e-10);
                CHECK(r.multipliers[i] * (gy - h[i]) == doctest::Approx(0.0).epsilon(1e-6));
            }
            for (int j = 0; j < dim; ++j) {
                double gt_lam = 0.0;
                for (int i = 0; i < m; ++i)
                    gt_lam += G[static_cast<size_t>(i) * dim + j] * r.multipliers[i];
                CHECK(r.y[j] == doctest::Approx(gt_lam).epsilon(1e-6));
            }
        }
    }

    TEST_CASE("infeasible systems produce a valid certificate") {
        // y <= -1 and y >= 1 simultaneously.
        LdpResult r = solve_ldp(2, 1, {-1, 1}, {1, 1});
        REQUIRE(r.converged);
        REQUIRE(!r.feasible);
        REQUIRE(r.farkas.size() == 2);
        double gt = 0.0, ht = 0.0;
        for (int i = 0; i < 2; ++i) {
            CHECK(r.farkas[i] >= 0.0);
            gt += (i == 0 ? -1.0 : 1.0) * r.farkas[i];
            ht += 1.0 * r.farkas[i];
        }
        CHECK(std::abs(gt) <= 1e-7);
        CHECK(ht > 1e-7);
    }
}
