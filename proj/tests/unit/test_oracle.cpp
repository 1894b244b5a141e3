#include <doctest.h>

#include <cmath>
#include <limits>

#include "dualdec/errors.hpp"
#include "dualdec/oracle.hpp"
#include "dualdec/problem.hpp"
#include "dualdec/rng.hpp"

using namespace dualdec;

namespace {

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

std::shared_ptr<QuadBoxLinearLocal> quad(double w, double r, double lo, double hi, double a,
                                         double b) {
    return std::make_shared<QuadBoxLinearLocal>(w, r, lo, hi, scalar(a), scalar(b));
}

/// Reference scan written independently of solve_grid: plain nested loops over
/// the product lattice, first feasible minimizer wins ties.
OracleResult naive_grid(const CoupledProblem& p, int P) {
    const int n = p.n();
    std::vector<int> k(n, 0);
    OracleResult best;
    best.method = OracleMethod::Grid;
    best.feasible = false;
    best.f_star = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<Eigen::VectorXd> x(n);
        for (int i = 0; i < n; ++i) {
            const double lo = p.locals[i]->lower()[0], hi = p.locals[i]->upper()[0];
            x[i] = scalar(lo + (hi - lo) * (static_cast<double>(k[i]) / (P - 1)));
        }
        if ((eval_coupling(p, x).array() <= 0.0).all()) {
            const double f = eval_cost(p, x);
            if (!best.feasible || f < best.f_star) {
                best.feasible = true;
                best.f_star = f;
                best.x_star = x;
            }
        }
        int pos = n - 1;
        while (pos >= 0 && k[pos] == P - 1) k[pos--] = 0;
        if (pos < 0) break;
        ++k[pos];
    }
    return best;
}

}  // namespace

TEST_CASE("hand-checked saddle: two agents sharing a lower bound on the sum") {
    // f_i = x^2 on [-1,1], coupling x_1 + x_2 >= 0.5 written as sum of
    // (-x + 0.25) <= 0. KKT gives x = (0.25, 0.25), mu = 0.5, f = 0.125.
    auto l = std::make_shared<QuadBoxLinearLocal>(1.0, 0.0, -1.0, 1.0, scalar(-1.0),
                                                  scalar(-0.25));
    CoupledProblem p = make_coupled({l, l}, 10.0);

    OracleResult dual = solve_dual_centralized(p);
    CHECK(dual.method == OracleMethod::DualSupergradient);
    CHECK(dual.f_star == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(dual.mu_star[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(dual.x_star[0][0] == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(dual.x_star[1][0] == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(dual.certified_gap <= 1e-9);
    CHECK(check_m_bound(dual, p.big_m));

    OracleResult grid = solve_grid(p, 2001);
    CHECK(grid.method == OracleMethod::Grid);
    CHECK(grid.feasible);
    CHECK(std::abs(grid.f_star - 0.125) <= 1e-3);
    CHECK(grid.mu_star.size() == 0);  // primal-only method
}

TEST_CASE("inactive coupling gives the unconstrained optimum") {
    CoupledProblem p = make_coupled({quad(1, 0, -1, 1, 1, 10)}, 10.0);
    OracleResult res = solve_dual_centralized(p);
    CHECK(res.f_star == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.mu_star[0] == 0.0);
    CHECK(res.certified_gap <= 1e-12);
}

TEST_CASE("grid flags infeasible instances and enforces its size bound") {
    CoupledProblem inf = make_coupled({quad(1, 0, -1, 1, 1, -100)}, 10.0);  // g = x + 100
    OracleResult res = solve_grid(inf, 101);
    CHECK_FALSE(res.feasible);
    CHECK(std::isinf(res.f_star));

    CoupledProblem big = benchmark_instance(5, 1, 1);
    CHECK_THROWS_AS(solve_grid(big, 11), TooLarge);
    CHECK_THROWS_AS(solve_grid(inf, 1), Error);
}

TEST_CASE("fast grid path equals the naive scan") {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 3);
        std::vector<std::shared_ptr<const LocalProblem>> locals;
        for (int i = 0; i < n; ++i)
            locals.push_back(quad(rng.uniform(0.5, 1.5), rng.uniform(-1, 1),
                                  rng.uniform(-1, -0.1), rng.uniform(0.1, 1),
                                  rng.uniform(-1.5, 1.5), rng.uniform(-0.5, 0.5)));
        CoupledProblem p = make_coupled(std::move(locals), 10.0);
        const int P = 31 + static_cast<int>(rng.next_u64() % 20);

        OracleResult fast = solve_grid(p, P);
        OracleResult naive = naive_grid(p, P);
        CHECK(fast.feasible == naive.feasible);
        if (fast.feasible) {
            CHECK(fast.f_star == naive.f_star);  // identical scan, bitwise
            for (int i = 0; i < n; ++i) CHECK(fast.x_star[i] == naive.x_star[i]);
        }
    }
}

TEST_CASE("dual and grid oracles agree under strong duality") {
    Rng rng(14);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 3);
        std::vector<std::shared_ptr<const LocalProblem>> locals;
        for (int i = 0; i < n; ++i)
            locals.push_back(quad(rng.uniform(0.5, 1.0), rng.uniform(-0.3, 0.3),
                                  rng.uniform(-0.12, -0.1), rng.uniform(0.1, 0.12),
                                  rng.uniform(0.5, 1.0), rng.uniform(0.0, 0.3)));
        CoupledProblem p = make_coupled(std::move(locals), 10.0);

        OracleResult dual = solve_dual_centralized(p);
        OracleResult grid = solve_grid(p, 2001);
        REQUIRE(grid.feasible);
        CHECK(std::abs(grid.f_star - dual.f_star) <= 1e-3);
        CHECK(grid.f_star >= dual.f_star - 1e-9);  // grid scans a feasible subset

        // Weak duality against the grid value at arbitrary multipliers.
        for (int probe = 0; probe < 5; ++probe) {
            const Eigen::VectorXd mu = scalar(rng.uniform(0.0, 10.0));
            CHECK(eval_dual(p, mu) <= grid.f_star + 1e-9);
        }
    }
}

TEST_CASE("best dual value is monotone along the search") {
    CoupledProblem p = benchmark_instance(6, 1, 2);
    OracleResult res = solve_dual_centralized(p);
    REQUIRE(res.best_value_history.size() > 2);
    for (std::size_t k = 1; k < res.best_value_history.size(); ++k)
        CHECK(res.best_value_history[k] >= res.best_value_history[k - 1]);
}

TEST_CASE("multiplier bound check") {
    CoupledProblem p = benchmark_instance(10, 1, 4);
    OracleResult res = solve_dual_centralized(p);
    CHECK(check_m_bound(res, 1200.0));  // benchmark bound is generous

    // A coupling that can never be satisfied drives the multiplier to the box.
    CoupledProblem pinned = make_coupled({quad(1, 0, -1, 1, 1, -100)}, 10.0);
    OracleResult hit = solve_dual_centralized(pinned);
    CHECK(hit.mu_star[0] == 10.0);
    CHECK_FALSE(check_m_bound(hit, 10.0));

    OracleResult grid = solve_grid(make_coupled({quad(1, 0, -1, 1, 1, 0)}, 10.0), 11);
    CHECK_THROWS_AS(check_m_bound(grid, 10.0), Error);
}

TEST_CASE("two-dimensional coupling via the ascent path") {
    // Two agents, S = 2 with both components of the benchmark form; verify
    // against the naive grid at a usable tolerance.
    Rng rng(6);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::shared_ptr<const LocalProblem>> locals;
        for (int i = 0; i < 2; ++i) {
            Eigen::VectorXd a(2), b(2);
            a << rng.uniform(0.5, 1.0), rng.uniform(0.5, 1.0);
            b << rng.uniform(0.05, 0.3), rng.uniform(0.05, 0.3);
            locals.push_back(std::make_shared<QuadBoxLinearLocal>(
                rng.uniform(0.5, 1.0), rng.uniform(-0.3, 0.0), -0.5, 0.5, a, b));
        }
        CoupledProblem p = make_coupled(std::move(locals), 10.0);
        OracleResult dual = solve_dual_centralized(p, 1e-6, 500000);
        OracleResult grid = solve_grid(p, 1001);
        REQUIRE(grid.feasible);
        CHECK(std::abs(grid.f_star - dual.f_star) <= 5e-3);
        CHECK((dual.mu_star.array() >= 0.0).all());
        CHECK((dual.mu_star.array() <= 10.0).all());
    }
}
