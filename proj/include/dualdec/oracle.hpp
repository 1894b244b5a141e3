#pragma once

#include <Eigen/Core>
#include <vector>

#include "dualdec/local_solver.hpp"
#include "dualdec/problem.hpp"

namespace dualdec {

enum class OracleMethod { DualSupergradient, Grid, Analytic };

struct OracleResult {
    double f_star = 0.0;
    Eigen::VectorXd mu_star;             ///< empty when the method produces none (grid)
    std::vector<Eigen::VectorXd> x_star;
    OracleMethod method = OracleMethod::Analytic;
    /// |relaxed primal at x_star - dual value|; honest, may exceed tol when
    /// the primal minimizer is non-unique. Vacuous (0) for grid results.
    double certified_gap = 0.0;
    bool feasible = true;
    /// Best dual value seen so far, one entry per dual evaluation.
    std::vector<double> best_value_history;
};

/// q(mu) = sum_i min over X_i of (f_i + mu . g_i).
double eval_dual(const CoupledProblem& p, const Eigen::VectorXd& mu,
                 const SolverSettings& settings = {});

/// Maximize q over [0, M]^S. For S == 1 the monotone supergradient
/// sum_i g_i(x_i(mu)) is bisected to machine precision; for S > 1 projected
/// supergradient ascent with step c/sqrt(k) and best-iterate tracking is used
/// and NonConvergence is thrown if the stationarity residual stays above tol.
OracleResult solve_dual_centralized(const CoupledProblem& p, double tol = 1e-9,
                                    int max_iters = 200000);

/// Exhaustive product-grid scan over all boxes (closed endpoints), keeping the
/// feasible minimizer of the raw cost; ties resolve to the lexicographically
/// smallest grid index. Requires N <= 4 and total dimension <= 4; runtime is
/// points^(total dim) in general. f_star carries O(spacing x Lipschitz) error.
OracleResult solve_grid(const CoupledProblem& p, int points_per_dim);

/// True iff the dual solution is strictly inside the multiplier box, i.e. the
/// relaxation bound did not clip the dual optimum.
bool check_m_bound(const OracleResult& result, double big_m);

}  // namespace dualdec
