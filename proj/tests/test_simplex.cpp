#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "episafe/rng.hpp"
#include "episafe/simplex.hpp"
#include "helpers.hpp"

using namespace episafe;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LpProblem box_problem(int n, std::vector<double> objective, double lo = 0.0, double hi = 1.0) {
    LpProblem p;
    p.num_vars = n;
    p.objective = std::move(objective);
    p.lower.assign(n, lo);
    p.upper.assign(n, hi);
    return p;
}

double row_value(const LpProblem& p, int i, const std::vector<double>& x) {
    double lhs = 0.0;
    for (auto [j, c] : p.rows[i]) lhs += c * x[j];
    return lhs;
}

}  // namespace

TEST_SUITE("simplex") {
    TEST_CASE("textbook instance with duals") {
        LpProblem p = box_problem(2, {-1.0, -2.0});
        p.rows = {{{0, 1.0}, {1, 1.0}}};
        p.rhs = {1.0};
        LpResult r = solve_lp(p);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.x[0] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.objective == doctest::Approx(-2.0).epsilon(1e-9));
        REQUIRE(r.row_duals.size() == 1);
        // Binding row, interior basic variable: multiplier equals the
        // objective slope along it.
        CHECK(r.row_duals[0] == doctest::Approx(2.0).epsilon(1e-7));
    }

    TEST_CASE("bounds-only problems need no rows") {
        LpProblem p = box_problem(2, {1.0, -1.0}, -2.0, 3.0);
        LpResult r = solve_lp(p);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.x == std::vector<double>{-2.0, 3.0});
        CHECK(r.objective == doctest::Approx(-5.0));
    }

    TEST_CASE("free variables work") {
        LpProblem p;
        p.num_vars = 1;
        p.objective = {1.0};
        p.lower = {-kInf};
        p.upper = {kInf};
        p.rows = {{{0, -1.0}}};  // -x <= 5, i.e. x >= -5
        p.rhs = {5.0};
        LpResult r = solve_lp(p);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.x[0] == doctest::Approx(-5.0).epsilon(1e-9));
    }

    TEST_CASE("equality emulated by opposing rows goes through phase one") {
        LpProblem p = box_problem(2, {1.0, 0.0});
        p.rows = {{{0, 1.0}, {1, 1.0}}, {{0, -1.0}, {1, -1.0}}};
        p.rhs = {1.0, -1.0};  // x0 + x1 == 1
        LpResult r = solve_lp(p);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(r.x[0] + r.x[1] == doctest::Approx(1.0).epsilon(1e-9));
    }

    TEST_CASE("infeasible instances come with a verifiable certificate") {
        LpProblem p = box_problem(2, {1.0, 1.0});
        p.rows = {{{0, 1.0}, {1, 1.0}}, {{0, -1.0}, {1, -1.0}}};
        p.rhs = {1.0, -3.0};  // sum <= 1 and sum >= 3
        LpResult r = solve_lp(p);
        REQUIRE(r.status == LpStatus::Infeasible);
        REQUIRE(r.infeasibility_witness.size() == 2);

        // The witness y >= 0 must make sum_i y_i * (row_i x) > sum_i y_i b_i
        // for every x in the box: minimize the left side coordinatewise.
        double ymax = 0.0, ytb = 0.0;
        std::vector<double> combo(2, 0.0);
        for (size_t i = 0; i < r.infeasibility_witness.size(); ++i) {
            const double y = r.infeasibility_witness[i];
            CHECK(y >= 0.0);
            ymax = std::max(ymax, y);
            ytb += y * p.rhs[i];
            for (auto [j, c] : p.rows[i]) combo[j] += y * c;
        }
        REQUIRE(ymax > 0.0);
        double min_lhs = 0.0;
        for (int j = 0; j < 2; ++j)
            min_lhs += combo[j] > 0.0 ? combo[j] * p.lower[j] : combo[j] * p.upper[j];
        CHECK(min_lhs > ytb + 1e-9);
    }

    TEST_CASE("unbounded rays are detected") {
        LpProblem p;
        p.num_vars = 2;
        p.objective = {-1.0, 0.0};
        p.lower = {0.0, 0.0};
        p.upper = {kInf, 1.0};
        p.rows = {{{1, 1.0}}};  // only constrains x1
        p.rhs = {0.5};
        LpResult r = solve_lp(p);
        CHECK(r.status == LpStatus::Unbounded);
    }

    TEST_CASE("iteration budget is honored") {
        LpProblem p = box_problem(2, {-1.0, -1.0});
        p.rows = {{{0, 1.0}, {1, 1.0}}};
        p.rhs = {1.5};
        CHECK(solve_lp(p).status == LpStatus::Optimal);
        CHECK(solve_lp(p, 1).status == LpStatus::IterationLimit);
    }

    TEST_CASE("dimension mismatches and bad bounds throw") {
        LpProblem p = box_problem(2, {1.0});
        CHECK_THROWS_AS(solve_lp(p), std::invalid_argument);
        LpProblem q = box_problem(2, {1.0, 1.0});
        q.lower[0] = 2.0;  // above upper
        CHECK_THROWS_AS(solve_lp(q), std::invalid_argument);
        LpProblem s = box_problem(1, {1.0});
        s.rows = {{{3, 1.0}}};
        s.rhs = {1.0};
        CHECK_THROWS_AS(solve_lp(s), std::invalid_argument);
    }

    TEST_CASE("random boxes match the vertex-enumeration oracle") {
        CounterRng rng(0x10A0);
        int solved = 0;
        for (int trial = 0; trial < 120; ++trial) {
            CounterRng sub = rng.derive(trial);
            LpProblem p = box_problem(3, {0, 0, 0});
            for (int j = 0; j < 3; ++j) p.objective[j] = sub.uniform(-1.0, 1.0);
            p.rows.resize(4);
            p.rhs.resize(4);
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 3; ++j) p.rows[i].emplace_back(j, sub.uniform(-1.0, 1.0));
                p.rhs[i] = sub.uniform(0.2, 1.2);  // origin stays feasible
            }
            LpResult r = solve_lp(p);
            CAPTURE(trial);
            REQUIRE(r.status == LpStatus::Optimal);
            for (int j = 0; j < 3; ++j) {
                CHECK(r.x[j] >= p.lower[j] - 1e-12);
                CHECK(r.x[j] <= p.upper[j] + 1e-12);
            }
            for (int i = 0; i < 4; ++i) CHECK(row_value(p, i, r.x) <= p.rhs[i] + 1e-9);

            auto oracle = test::lp_vertex_oracle(p);
            REQUIRE(oracle.has_value());
            CHECK(r.objective == doctest::Approx(oracle->first).epsilon(1e-6));
            ++solved;
        }
        CHECK(solved == 120);
    }

    TEST_CASE("upper-bound warm start changes nothing but the path") {
        CounterRng rng(0xF00D);
        for (int trial = 0; trial < 40; ++trial) {
            CounterRng sub = rng.derive(trial);
            LpProblem p = box_problem(4, {0, 0, 0, 0});
            for (int j = 0; j < 4; ++j) p.objective[j] = sub.uniform(-1.0, 1.0);
            p.rows.resize(3);
            p.rhs.resize(3);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 4; ++j) p.rows[i].emplace_back(j, sub.uniform(0.0, 1.0));
                p.rhs[i] = sub.uniform(3.0, 6.0);  // loose enough for any corner
            }
            LpResult cold = solve_lp(p);
            LpProblem warm = p;
            warm.start_at_upper.assign(4, 1);
            LpResult hot = solve_lp(warm);
            REQUIRE(cold.status == LpStatus::Optimal);
            REQUIRE(hot.status == LpStatus::Optimal);
            CHECK(hot.objective == doctest::Approx(cold.objective).epsilon(1e-9));
        }
    }

    TEST_CASE("repeated solves are bit-identical") {
        CounterRng rng(0xD1CE);
        LpProblem p = box_problem(5, {0, 0, 0, 0, 0});
        for (int j = 0; j < 5; ++j) p.objective[j] = rng.uniform(-1.0, 1.0);
        p.rows.resize(6);
        p.rhs.resize(6);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 5; ++j) p.rows[i].emplace_back(j, rng.uniform(-1.0, 1.0));
            p.rhs[i] = rng.uniform(0.2, 1.5);
        }
        LpResult a = solve_lp(p);
        LpResult b = solve_lp(p);
        REQUIRE(a.status == b.status);
        CHECK(a.x == b.x);
        CHECK(a.objective == b.objective);
        CHECK(a.iterations == b.iterations);
    }
}
