#include "dualdec/coordinator.hpp"

#include <cmath>
#include <string>

#include "dualdec/errors.hpp"

namespace dualdec {

double StepSize::at(int t) const { return c * std::pow(static_cast<double>(t) + t0, -a); }

bool validate_stepsize(const StepSize& s) { return s.c > 0.0 && s.a > 0.5 && s.a <= 1.0; }

std::vector<AgentState> init(const CoupledProblem& p, const Graph& g,
                             const std::optional<std::vector<Eigen::VectorXd>>& lambda0) {
    if (g.n != p.n())
        throw DimensionMismatch("init: graph has " + std::to_string(g.n) + " nodes for " +
                                std::to_string(p.n()) + " agents");
    const DirectedEdgeIndex idx(g);
    if (lambda0) {
        if (static_cast<int>(lambda0->size()) != idx.count())
            throw DimensionMismatch("init: lambda0 holds " + std::to_string(lambda0->size()) +
                                    " vectors, expected " + std::to_string(idx.count()));
        for (const auto& v : *lambda0)
            if (v.size() != p.s_dim)
                throw DimensionMismatch("init: lambda0 entry of dim " + std::to_string(v.size()) +
                                        ", expected " + std::to_string(p.s_dim));
    }

    std::vector<AgentState> states(g.n);
    for (int i = 0; i < g.n; ++i) {
        states[i].lambda_out.resize(g.degree(i));
        for (int k = 0; k < g.degree(i); ++k) {
            const int j = g.adjacency[i][k];
            states[i].lambda_out[k] =
                lambda0 ? (*lambda0)[idx.index(i, j)] : Eigen::VectorXd::Zero(p.s_dim);
        }
    }
    return states;
}

std::vector<Eigen::VectorXd> compute_offsets(const std::vector<AgentState>& states,
                                             const Graph& g, int s_dim) {
    // Per-edge differences accumulated in extended precision: the two endpoints
    // receive exactly opposite addends, so the offsets redistribute rather than
    // create coupling budget down to the final double rounding.
    std::vector<std::vector<long double>> acc(states.size(),
                                              std::vector<long double>(s_dim, 0.0L));
    for (auto [i, j] : g.edges) {
        const Eigen::VectorXd& lam_ij = states[i].lambda_out[g.neighbor_pos(i, j)];
        const Eigen::VectorXd& lam_ji = states[j].lambda_out[g.neighbor_pos(j, i)];
        for (int s = 0; s < s_dim; ++s) {
            const long double delta =
                static_cast<long double>(lam_ij[s]) - static_cast<long double>(lam_ji[s]);
            acc[i][s] += delta;
            acc[j][s] -= delta;
        }
    }
    std::vector<Eigen::VectorXd> d(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        d[i] = Eigen::VectorXd(s_dim);
        for (int s = 0; s < s_dim; ++s) d[i][s] = static_cast<double>(acc[i][s]);
    }
    return d;
}

RoundResult round(const std::vector<AgentState>& states, const CoupledProblem& p, const Graph& g,
                  int t, const StepSize& gamma, const SolverSettings& settings) {
    if (t < 1) throw Error("round: iteration counter starts at 1");
    if (static_cast<int>(states.size()) != p.n())
        throw DimensionMismatch("round: state count does not match agent count");

    RoundResult out;
    out.states = states;
    out.log.t = t;
    out.log.messages_sent = 4L * g.edge_count();  // lambda gather + mu exchange, both directions

    // Phase 1: gather lambdas, solve every agent at its offset. The solves are
    // pure functions of (local, d, M); order does not matter.
    const std::vector<Eigen::VectorXd> d = compute_offsets(states, g, p.s_dim);
    for (int i = 0; i < p.n(); ++i) {
        try {
            LocalSolution sol = solve_relaxed_local(*p.locals[i], d[i], p.big_m, settings);
            out.states[i].x = std::move(sol.x);
            out.states[i].rho = std::move(sol.rho);
            out.states[i].mu = std::move(sol.mu);
        } catch (const NonConvergence& e) {
            throw NonConvergence("agent " + std::to_string(i + 1) + " at round " +
                                 std::to_string(t) + ": " + e.what());
        }
    }

    // Phase 2: gather fresh multipliers, update lambdas. Both directions of an
    // edge subtract exactly opposite quantities, so lambda_ij + lambda_ji is
    // conserved and a zero initialization stays exactly antisymmetric.
    const double step = gamma.at(t);
    for (int i = 0; i < g.n; ++i) {
        for (int k = 0; k < g.degree(i); ++k) {
            const int j = g.adjacency[i][k];
            out.states[i].lambda_out[k] -= step * (out.states[i].mu - out.states[j].mu);
        }
    }

    out.log.x.reserve(p.n());
    out.log.rho.reserve(p.n());
    out.log.mu.reserve(p.n());
    for (const auto& st : out.states) {
        out.log.x.push_back(st.x);
        out.log.rho.push_back(st.rho);
        out.log.mu.push_back(st.mu);
    }
    return out;
}

std::vector<AgentState> run(const CoupledProblem& p, const Graph& g, const StepSize& gamma,
                            int iterations,
                            const std::optional<std::vector<Eigen::VectorXd>>& lambda0,
                            const SolverSettings& settings, const TraceSink& sink) {
    std::vector<AgentState> states = init(p, g, lambda0);
    for (int t = 1; t <= iterations; ++t) {
        RoundResult r = round(states, p, g, t, gamma, settings);
        states = std::move(r.states);
        if (sink) sink(r.log, states);
    }
    return states;
}

}  // namespace dualdec
