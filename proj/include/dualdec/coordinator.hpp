#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "dualdec/graph.hpp"
#include "dualdec/local_solver.hpp"
#include "dualdec/problem.hpp"

namespace dualdec {

/// Diminishing step-size family gamma(t) = c * (t + t0)^(-a), evaluated at
/// round counters t = 1, 2, ...
struct StepSize {
    double c = 0.5;
    double a = 0.8;
    double t0 = 0.0;

    double at(int t) const;
};

/// True iff the family member is non-summable, square-summable and vanishing,
/// which within this family is exactly a in (0.5, 1] (and c > 0).
bool validate_stepsize(const StepSize& s);

/// Per-agent state carried across rounds. lambda_out[k] is the multiplier this
/// agent owns for the k-th neighbor in the graph's adjacency list; x, rho and
/// mu are empty until the first round has run.
struct AgentState {
    Eigen::VectorXd x;
    Eigen::VectorXd rho;
    Eigen::VectorXd mu;
    std::vector<Eigen::VectorXd> lambda_out;
};

struct RoundLog {
    int t = 0;
    std::vector<Eigen::VectorXd> x, rho, mu;  ///< per-agent copies after the round
    long messages_sent = 0;                   ///< 2 gathers over each directed edge
};

/// Called once per round, in iteration order, with the log row and a view of
/// the post-round states (the states carry the lambdas, which the log omits).
using TraceSink = std::function<void(const RoundLog&, const std::vector<AgentState>&)>;

/// Build initial states. lambda0, when given, is indexed in DirectedEdgeIndex
/// order (both directions of edge e at positions 2e and 2e+1) and must hold
/// 2|E| vectors of dimension S; omitted means all zeros.
std::vector<AgentState> init(const CoupledProblem& p, const Graph& g,
                             const std::optional<std::vector<Eigen::VectorXd>>& lambda0 = {});

/// Per-agent coupling offsets d_i = sum_j (lambda_ij - lambda_ji). Computed
/// from per-edge differences so the offsets redistribute exactly: the offsets
/// of the two endpoints receive exactly opposite addends.
std::vector<Eigen::VectorXd> compute_offsets(const std::vector<AgentState>& states,
                                             const Graph& g, int s_dim);

struct RoundResult {
    std::vector<AgentState> states;
    RoundLog log;
};

/// One synchronous round at counter t: gather lambdas, solve every agent's
/// relaxed subproblem at its offset, gather the fresh multipliers, update the
/// lambdas with step gamma(t). All lambda reads happen before any write.
RoundResult round(const std::vector<AgentState>& states, const CoupledProblem& p, const Graph& g,
                  int t, const StepSize& gamma, const SolverSettings& settings = {});

/// Execute rounds t = 1..iterations, streaming one log per round to the sink.
/// Deterministic given all inputs. A failing local solve aborts the whole run.
std::vector<AgentState> run(const CoupledProblem& p, const Graph& g, const StepSize& gamma,
                            int iterations,
                            const std::optional<std::vector<Eigen::VectorXd>>& lambda0 = {},
                            const SolverSettings& settings = {}, const TraceSink& sink = {});

}  // namespace dualdec
