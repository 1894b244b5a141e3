#include "dualdec/local_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dualdec/errors.hpp"

namespace dualdec {

namespace {

Eigen::VectorXd clamp_to_box(const Eigen::VectorXd& v, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi) {
    return v.cwiseMax(lo).cwiseMin(hi);
}

void check_mu(const LocalProblem& local, const Eigen::VectorXd& mu) {
    if (mu.size() != local.coupling_dim())
        throw DimensionMismatch("inner_min: mu has dim " + std::to_string(mu.size()) +
                                ", coupling dim is " + std::to_string(local.coupling_dim()));
    if ((mu.array() < 0.0).any()) throw Error("inner_min: mu must be nonnegative");
}

struct DescentOpts {
    double res_tol = 1e-10;
    int max_iters = 100000;
    double fallback_scale = 1.0;
};

struct DescentResult {
    Eigen::VectorXd x;
    bool hit_cap = false;
};

/// Projected descent on a convex objective over the box: gradient steps with
/// backtracking, falling back to a diminishing normalized subgradient step
/// whenever backtracking finds no decrease (nonsmooth case). Exits when the
/// projected-gradient residual meets res_tol or the value stalls at machine
/// level; returns the best iterate by value. Deterministic.
template <typename Value, typename Subgrad>
DescentResult projected_descent(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                Value&& value, Subgrad&& subgrad, const DescentOpts& opts) {
    const double diam = (hi - lo).cwiseAbs().maxCoeff();
    Eigen::VectorXd x = 0.5 * (lo + hi);
    double fx = value(x);
    Eigen::VectorXd best_x = x;
    double best_f = fx;
    double step = diam > 0.0 ? diam : 1.0;
    int stall = 0;

    for (int k = 0; k < opts.max_iters; ++k) {
        const Eigen::VectorXd sg = subgrad(x);
        const double residual = (x - clamp_to_box(x - sg, lo, hi)).cwiseAbs().maxCoeff() /
                                (1.0 + sg.cwiseAbs().maxCoeff());
        if (residual <= opts.res_tol) return {x, false};

        // Backtracking projected step.
        double t = step;
        bool accepted = false;
        for (int h = 0; h < 60; ++h) {
            Eigen::VectorXd xt = clamp_to_box(x - t * sg, lo, hi);
            const double ft = value(xt);
            if (ft <= fx - 1e-4 * sg.dot(x - xt)) {
                x = std::move(xt);
                fx = ft;
                step = 2.0 * t;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // Diminishing normalized subgradient step; accept unconditionally.
            const double norm = sg.norm();
            if (norm == 0.0) return {x, false};
            x = clamp_to_box(x - (opts.fallback_scale * diam / std::sqrt(k + 1.0)) * sg / norm,
                             lo, hi);
            fx = value(x);
        }
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
            stall = 0;
        } else if (++stall >= 500) {
            return {best_x, false};  // no exact improvement for a long stretch
        }
    }
    return {best_x, true};
}

}  // namespace

InnerMinResult inner_min(const LocalProblem& local, const Eigen::VectorXd& mu,
                         const SolverSettings& settings) {
    check_mu(local, mu);
    if (auto closed = local.inner_minimum(mu)) return {std::move(closed->x), closed->value};

    auto psi = [&](const Eigen::VectorXd& x) { return local.cost(x) + mu.dot(local.coupling(x)); };
    auto psi_sg = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return local.cost_subgradient(x) + local.coupling_subgradient(x).transpose() * mu;
    };
    DescentResult res = projected_descent(local.lower(), local.upper(), psi, psi_sg,
                                          {settings.inner_tol, settings.max_inner_iters, 1.0});
    if (res.hit_cap)
        throw NonConvergence("inner_min: projected descent hit the iteration cap (" +
                             std::to_string(settings.max_inner_iters) + ") above tolerance");
    return {res.x, psi(res.x)};
}

double kkt_residual_of(const LocalProblem& local, const Eigen::VectorXd& d, double big_m,
                       const LocalSolution& sol) {
    const Eigen::VectorXd gd = local.coupling(sol.x) + d;

    const Eigen::VectorXd grad =
        local.cost_subgradient(sol.x) + local.coupling_subgradient(sol.x).transpose() * sol.mu;
    const double stat =
        (sol.x - clamp_to_box(sol.x - grad, local.lower(), local.upper())).cwiseAbs().maxCoeff() /
        (1.0 + grad.cwiseAbs().maxCoeff());

    double comp_couple = 0.0, comp_bound = 0.0, rho_mismatch = 0.0;
    for (int s = 0; s < gd.size(); ++s) {
        const double slack = gd[s] - sol.rho[s];
        comp_couple = std::max(comp_couple, (sol.mu[s] / big_m) * std::abs(slack) /
                                                (1.0 + std::abs(gd[s]) + sol.rho[s]));
        comp_bound = std::max(comp_bound, ((big_m - sol.mu[s]) / big_m) * sol.rho[s] /
                                              (1.0 + sol.rho[s]));
        rho_mismatch = std::max(rho_mismatch, std::abs(sol.rho[s] - std::max(0.0, gd[s])) /
                                                  (1.0 + std::abs(gd[s])));
    }
    return std::max({stat, comp_couple, comp_bound, rho_mismatch});
}

namespace {

LocalSolution assemble(const LocalProblem& local, const Eigen::VectorXd& d, double big_m,
                       Eigen::VectorXd x, Eigen::VectorXd mu) {
    LocalSolution sol;
    sol.x = std::move(x);
    sol.mu = std::move(mu);
    sol.rho = (local.coupling(sol.x) + d).cwiseMax(0.0);
    sol.kkt_residual = kkt_residual_of(local, d, big_m, sol);
    return sol;
}

/// Exact path for S == 1 with a closed-form inner minimum: phi(mu) = q(mu) + mu d
/// is concave, so its supergradient g(x(mu)) + d is nonincreasing; bisect its
/// sign down to adjacent doubles and return the right endpoint, where the
/// supergradient is <= 0 (this makes rho = max(0, g+d) vanish exactly whenever
/// the multiplier bound is inactive).
LocalSolution solve_bisection(const LocalProblem& local, const Eigen::VectorXd& d, double big_m) {
    auto sgrad = [&](double mu) {
        Eigen::VectorXd muv = Eigen::VectorXd::Constant(1, mu);
        auto inner = local.inner_minimum(muv);
        return local.coupling(inner->x)[0] + d[0];
    };
    auto at = [&](double mu) {
        Eigen::VectorXd muv = Eigen::VectorXd::Constant(1, mu);
        return assemble(local, d, big_m, local.inner_minimum(muv)->x, muv);
    };

    if (sgrad(0.0) <= 0.0) return at(0.0);
    if (sgrad(big_m) > 0.0) return at(big_m);

    double lo = 0.0, hi = big_m;  // sgrad(lo) > 0 >= sgrad(hi)
    while (true) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        (sgrad(mid) <= 0.0 ? hi : lo) = mid;
    }
    return at(hi);
}

/// Generic multiplier search: maximize the concave phi(mu) = q(mu) + mu . d
/// over [0, M]^S with the same projected descent engine (applied to -phi),
/// mu_step_scale scaling its diminishing fallback steps. The assembled
/// solution is certified by its KKT residual.
LocalSolution solve_ascent(const LocalProblem& local, const Eigen::VectorXd& d, double big_m,
                           const SolverSettings& settings) {
    const int s_dim = local.coupling_dim();
    auto neg_phi = [&](const Eigen::VectorXd& mu) {
        return -(inner_min(local, mu, settings).value + mu.dot(d));
    };
    auto neg_phi_sg = [&](const Eigen::VectorXd& mu) -> Eigen::VectorXd {
        return -(local.coupling(inner_min(local, mu, settings).x) + d);
    };
    DescentResult res = projected_descent(
        Eigen::VectorXd::Zero(s_dim), Eigen::VectorXd::Constant(s_dim, big_m), neg_phi,
        neg_phi_sg,
        {0.1 * settings.tol, settings.max_outer_iters, settings.mu_step_scale});

    Eigen::VectorXd x = inner_min(local, res.x, settings).x;
    LocalSolution sol = assemble(local, d, big_m, std::move(x), std::move(res.x));
    if (sol.kkt_residual > settings.tol)
        throw NonConvergence("solve_relaxed_local: kkt residual " +
                             std::to_string(sol.kkt_residual) + " > tol " +
                             std::to_string(settings.tol) + " after the multiplier search" +
                             (res.hit_cap ? " hit its iteration cap" : " stalled"));
    return sol;
}

}  // namespace

LocalSolution solve_relaxed_local(const LocalProblem& local, const Eigen::VectorXd& d,
                                  double big_m, const SolverSettings& settings) {
    if (d.size() != local.coupling_dim())
        throw DimensionMismatch("solve_relaxed_local: d has dim " + std::to_string(d.size()) +
                                ", coupling dim is " + std::to_string(local.coupling_dim()));
    if (!d.allFinite()) throw Error("solve_relaxed_local: offset d must be finite");
    if (!(big_m > 0.0)) throw Error("solve_relaxed_local: M must be > 0");

    const bool closed_form = local.inner_minimum(Eigen::VectorXd::Zero(d.size())).has_value();
    if (local.coupling_dim() == 1 && closed_form) return solve_bisection(local, d, big_m);
    return solve_ascent(local, d, big_m, settings);
}

double min_max_violation(const LocalProblem& local, const Eigen::VectorXd& d,
                         const SolverSettings& settings) {
    if (d.size() != local.coupling_dim())
        throw DimensionMismatch("min_max_violation: d has dim " + std::to_string(d.size()));
    auto h = [&](const Eigen::VectorXd& x) { return (local.coupling(x) + d).maxCoeff(); };

    if (local.dim() == 1) {
        // Convex in a scalar over an interval: golden-section to high accuracy,
        // then compare with the endpoints.
        double lo = local.lower()[0], hi = local.upper()[0];
        auto h1 = [&](double x) { return h(Eigen::VectorXd::Constant(1, x)); };
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = h1(c1), f2 = h1(c2);
        for (int it = 0; it < 200 && (b - a) > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
            if (f1 <= f2) {
                b = c2, c2 = c1, f2 = f1;
                c1 = b - gr * (b - a);
                f1 = h1(c1);
            } else {
                a = c1, c1 = c2, f1 = f2;
                c2 = a + gr * (b - a);
                f2 = h1(c2);
            }
        }
        return std::min({h1(lo), h1(hi), h1(0.5 * (a + b))});
    }

    auto h_sg = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd gx = local.coupling(x) + d;
        int arg = 0;
        gx.maxCoeff(&arg);
        return local.coupling_subgradient(x).row(arg).transpose();
    };
    DescentResult res = projected_descent(local.lower(), local.upper(), h, h_sg,
                                          {settings.inner_tol, settings.max_inner_iters, 1.0});
    if (res.hit_cap)
        throw NonConvergence("min_max_violation: projected descent hit the iteration cap above "
                             "tolerance");
    return h(res.x);
}

bool nonrelaxed_feasibility_diagnostic(const LocalProblem& local, const Eigen::VectorXd& d,
                                       const SolverSettings& settings) {
    return min_max_violation(local, d, settings) <= 0.0;
}

}  // namespace dualdec
