#pragma once

#include <Eigen/Core>

#include "dualdec/problem.hpp"

namespace dualdec {

struct SolverSettings {
    double tol = 1e-8;           ///< KKT residual target for the relaxed local solve
    int max_outer_iters = 100000;  ///< cap on the multiplier search (generic path)
    double mu_step_scale = 1.0;  ///< scales the multiplier search's diminishing fallback steps
    double inner_tol = 1e-10;    ///< projected-gradient residual target for inner minimization
    int max_inner_iters = 100000;  ///< cap for the inner minimization (generic path)
};

/// Primal-dual solution of one agent's relaxed subproblem
///   min f(x) + M 1'rho   s.t.  x in X,  rho >= 0,  g(x) + d <= rho.
/// Invariants: x inside the box exactly, 0 <= mu <= M exactly,
/// rho == max(0, g(x) + d) componentwise.
struct LocalSolution {
    Eigen::VectorXd x;
    Eigen::VectorXd rho;
    Eigen::VectorXd mu;
    double kkt_residual = 0.0;
};

struct InnerMinResult {
    Eigen::VectorXd x;
    double value = 0.0;  ///< q_i(mu) = min over the box of f + mu . g
};

/// Minimize f(x) + mu . g(x) over the box. Uses the family's closed form when
/// available, otherwise projected subgradient descent with backtracking from
/// the box midpoint (deterministic; any minimizer selection is admissible for
/// the outer method).
InnerMinResult inner_min(const LocalProblem& local, const Eigen::VectorXd& mu,
                         const SolverSettings& settings = {});

/// Solve the relaxed local subproblem for offset d = sum_j (lambda_ij - lambda_ji).
/// The multiplier is found by maximizing phi(mu) = q(mu) + mu . d over [0, M]^S:
/// a sign bisection on the monotone supergradient when S == 1 and the family
/// has a closed-form inner minimum (exact to machine precision), projected
/// supergradient ascent with backtracking otherwise. rho is always recovered
/// analytically as max(0, g(x) + d).
LocalSolution solve_relaxed_local(const LocalProblem& local, const Eigen::VectorXd& d,
                                  double big_m, const SolverSettings& settings = {});

/// min over the box of max_s (g(x) + d)_s: nonpositive iff the non-relaxed
/// local constraint g(x) + d <= 0 admits a feasible point.
double min_max_violation(const LocalProblem& local, const Eigen::VectorXd& d,
                         const SolverSettings& settings = {});

/// True iff the non-relaxed local subproblem is well posed at this offset.
bool nonrelaxed_feasibility_diagnostic(const LocalProblem& local, const Eigen::VectorXd& d,
                                       const SolverSettings& settings = {});

/// Worst scaled KKT violation of (x, rho, mu) for the relaxed local problem:
/// max of box-stationarity gap, both complementarity products and the rho
/// recovery mismatch, each normalized to be scale-free.
double kkt_residual_of(const LocalProblem& local, const Eigen::VectorXd& d, double big_m,
                       const LocalSolution& sol);

}  // namespace dualdec
