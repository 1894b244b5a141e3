#include "dualdec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dualdec/errors.hpp"

namespace dualdec {

double eval_dual(const CoupledProblem& p, const Eigen::VectorXd& mu,
                 const SolverSettings& settings) {
    double total = 0.0;
    for (const auto& local : p.locals) total += inner_min(*local, mu, settings).value;
    return total;
}

namespace {

std::vector<Eigen::VectorXd> recover_primal(const CoupledProblem& p, const Eigen::VectorXd& mu,
                                            const SolverSettings& settings) {
    std::vector<Eigen::VectorXd> x;
    x.reserve(p.locals.size());
    for (const auto& local : p.locals) x.push_back(inner_min(*local, mu, settings).x);
    return x;
}

/// Relaxed primal value at x: raw cost plus M times the positive part of the
/// total coupling (the slack block eliminated at its optimum).
double relaxed_primal_value(const CoupledProblem& p, const std::vector<Eigen::VectorXd>& x) {
    return eval_cost(p, x) + p.big_m * eval_coupling(p, x).cwiseMax(0.0).sum();
}

OracleResult finish_dual(const CoupledProblem& p, Eigen::VectorXd mu, double q_star,
                         std::vector<double> history, const SolverSettings& settings) {
    OracleResult res;
    res.method = OracleMethod::DualSupergradient;
    res.mu_star = std::move(mu);
    res.f_star = q_star;
    res.x_star = recover_primal(p, res.mu_star, settings);
    res.certified_gap = std::abs(relaxed_primal_value(p, res.x_star) - q_star);
    res.best_value_history = std::move(history);
    return res;
}

OracleResult dual_bisection_1d(const CoupledProblem& p, const SolverSettings& settings) {
    std::vector<double> history;
    double best = -std::numeric_limits<double>::infinity();
    auto probe = [&](double mu) {
        Eigen::VectorXd muv = Eigen::VectorXd::Constant(1, mu);
        double slope = 0.0, value = 0.0;
        for (const auto& local : p.locals) {
            InnerMinResult inner = inner_min(*local, muv, settings);
            slope += local->coupling(inner.x)[0];
            value += inner.value;
        }
        best = std::max(best, value);
        history.push_back(best);
        return slope;
    };

    double mu_star;
    if (probe(0.0) <= 0.0) {
        mu_star = 0.0;
    } else if (probe(p.big_m) > 0.0) {
        mu_star = p.big_m;
    } else {
        double lo = 0.0, hi = p.big_m;
        while (true) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            (probe(mid) <= 0.0 ? hi : lo) = mid;
        }
        mu_star = hi;
    }
    const Eigen::VectorXd muv = Eigen::VectorXd::Constant(1, mu_star);
    const double q_star = eval_dual(p, muv, settings);
    best = std::max(best, q_star);
    history.push_back(best);
    return finish_dual(p, muv, q_star, std::move(history), settings);
}

OracleResult dual_ascent(const CoupledProblem& p, double tol, int max_iters,
                         const SolverSettings& settings) {
    const int s = p.s_dim;
    const double big_m = p.big_m;
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(s);
    Eigen::VectorXd mu_best = mu;
    double q_best = -std::numeric_limits<double>::infinity();
    std::vector<double> history;
    history.reserve(std::min(max_iters, 1 << 20));

    for (int k = 1; k <= max_iters; ++k) {
        Eigen::VectorXd slope = Eigen::VectorXd::Zero(s);
        double value = 0.0;
        for (const auto& local : p.locals) {
            InnerMinResult inner = inner_min(*local, mu, settings);
            slope += local->coupling(inner.x);
            value += inner.value;
        }
        if (value > q_best) {
            q_best = value;
            mu_best = mu;
        }
        history.push_back(q_best);

        const double residual =
            (mu - (mu + slope).cwiseMax(0.0).cwiseMin(big_m)).cwiseAbs().maxCoeff() /
            (1.0 + slope.cwiseAbs().maxCoeff());
        if (residual <= tol) return finish_dual(p, mu_best, q_best, std::move(history), settings);
        const double step = 0.1 * std::max(1.0, big_m) / std::sqrt(static_cast<double>(k));
        const double norm = slope.norm();
        if (norm == 0.0) return finish_dual(p, mu, value, std::move(history), settings);
        mu = (mu + (step / norm) * slope).cwiseMax(0.0).cwiseMin(big_m);
    }
    throw NonConvergence("solve_dual_centralized: stationarity residual above tol " +
                         std::to_string(tol) + " after " + std::to_string(max_iters) +
                         " iterations");
}

}  // namespace

OracleResult solve_dual_centralized(const CoupledProblem& p, double tol, int max_iters) {
    SolverSettings settings;
    settings.inner_tol = std::min(1e-10, tol);
    if (p.s_dim == 1) return dual_bisection_1d(p, settings);
    return dual_ascent(p, tol, max_iters, settings);
}

namespace {

struct GridBest {
    double value = std::numeric_limits<double>::infinity();
    std::vector<int> index;  // flat lattice index per agent block, lexicographic tie-break
    bool found = false;
};

}  // namespace

OracleResult solve_grid(const CoupledProblem& p, int points_per_dim) {
    const int n = p.n();
    int total_dim = 0;
    for (const auto& l : p.locals) total_dim += l->dim();
    if (n > 4 || total_dim > 4)
        throw TooLarge("solve_grid: limited to N <= 4 and total dimension <= 4 (got N=" +
                       std::to_string(n) + ", dim=" + std::to_string(total_dim) + ")");
    if (points_per_dim < 2) throw Error("solve_grid: need at least 2 points per dimension");

    const int P = points_per_dim;

    // Lattice coordinates per agent dimension, closed endpoints.
    auto coord = [&](const LocalProblem& l, int dim, int k) {
        const double lo = l.lower()[dim], hi = l.upper()[dim];
        return lo + (hi - lo) * (static_cast<double>(k) / (P - 1));
    };

    bool scalar_fast = p.s_dim == 1 && n >= 1;
    for (const auto& l : p.locals) scalar_fast = scalar_fast && l->dim() == 1;

    GridBest best;

    if (scalar_fast) {
        // Tabulate every agent once: P cost values and P coupling values.
        std::vector<std::vector<double>> F(n), G(n);
        for (int i = 0; i < n; ++i) {
            F[i].resize(P);
            G[i].resize(P);
            Eigen::VectorXd x(1);
            for (int k = 0; k < P; ++k) {
                x[0] = coord(*p.locals[i], 0, k);
                F[i][k] = p.locals[i]->cost(x);
                G[i][k] = p.locals[i]->coupling(x)[0];
            }
        }

        // The innermost agent's scan "min f over {k : g[k] <= thr}" is served
        // by a prefix-min over its points sorted by coupling value; this is an
        // exact reorganization of the exhaustive loop (verified against the
        // naive scan in the test suite).
        const int last = n - 1;
        std::vector<int> order(P);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (G[last][a] != G[last][b]) return G[last][a] < G[last][b];
            return a < b;
        });
        std::vector<double> sorted_g(P), prefix_val(P);
        std::vector<int> prefix_idx(P);
        for (int m = 0; m < P; ++m) {
            sorted_g[m] = G[last][order[m]];
            const double v = F[last][order[m]];
            if (m == 0 || v < prefix_val[m - 1] ||
                (v == prefix_val[m - 1] && order[m] < prefix_idx[m - 1])) {
                prefix_val[m] = v;
                prefix_idx[m] = order[m];
            } else {
                prefix_val[m] = prefix_val[m - 1];
                prefix_idx[m] = prefix_idx[m - 1];
            }
        }

        std::vector<int> k(n, 0);
        const int outer = n - 1;
        while (true) {
            double pf = 0.0, pg = 0.0;
            for (int i = 0; i < outer; ++i) {
                pf += F[i][k[i]];
                pg += G[i][k[i]];
            }
            // Largest m with sorted_g[m] <= -pg.
            const double thr = -pg;
            const auto it = std::upper_bound(sorted_g.begin(), sorted_g.end(), thr);
            if (it != sorted_g.begin()) {
                const int m = static_cast<int>(it - sorted_g.begin()) - 1;
                const double cand = pf + prefix_val[m];
                if (!best.found || cand < best.value) {
                    best.found = true;
                    best.value = cand;
                    best.index.assign(k.begin(), k.begin() + outer);
                    best.index.push_back(prefix_idx[m]);
                }
            }
            // Odometer over the outer agents, lexicographic order.
            int pos = outer - 1;
            while (pos >= 0 && k[pos] == P - 1) k[pos--] = 0;
            if (pos < 0) break;
            ++k[pos];
        }
    } else {
        // Naive scan over the full product lattice, agent blocks in order.
        std::vector<int> radix;  // flat block sizes per agent
        for (int i = 0; i < n; ++i) {
            int count = 1;
            for (int dd = 0; dd < p.locals[i]->dim(); ++dd) count *= P;
            radix.push_back(count);
        }
        std::vector<int> k(n, 0);
        std::vector<Eigen::VectorXd> x(n);
        for (int i = 0; i < n; ++i) x[i] = Eigen::VectorXd::Zero(p.locals[i]->dim());
        auto unpack = [&](int i) {
            int rem = k[i];
            for (int dd = p.locals[i]->dim() - 1; dd >= 0; --dd) {
                x[i][dd] = coord(*p.locals[i], dd, rem % P);
                rem /= P;
            }
        };
        for (int i = 0; i < n; ++i) unpack(i);
        while (true) {
            double f = 0.0;
            Eigen::VectorXd gsum = Eigen::VectorXd::Zero(p.s_dim);
            for (int i = 0; i < n; ++i) {
                f += p.locals[i]->cost(x[i]);
                gsum += p.locals[i]->coupling(x[i]);
            }
            if ((gsum.array() <= 0.0).all() && (!best.found || f < best.value)) {
                best.found = true;
                best.value = f;
                best.index = k;
            }
            int pos = n - 1;
            while (pos >= 0 && k[pos] == radix[pos] - 1) {
                k[pos] = 0;
                unpack(pos);
                --pos;
            }
            if (pos < 0) break;
            ++k[pos];
            unpack(pos);
        }
    }

    OracleResult res;
    res.method = OracleMethod::Grid;
    res.feasible = best.found;
    if (!best.found) {
        res.f_star = std::numeric_limits<double>::infinity();
        return res;
    }
    res.f_star = best.value;
    res.x_star.resize(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd xi(p.locals[i]->dim());
        int rem = best.index[i];
        for (int dd = p.locals[i]->dim() - 1; dd >= 0; --dd) {
            xi[dd] = coord(*p.locals[i], dd, rem % P);
            rem /= P;
        }
        res.x_star[i] = std::move(xi);
    }
    return res;
}

bool check_m_bound(const OracleResult& result, double big_m) {
    if (result.method != OracleMethod::DualSupergradient)
        throw Error("check_m_bound: needs a dual-supergradient result");
    return result.mu_star.cwiseAbs().maxCoeff() < big_m;
}

}  // namespace dualdec
