#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dualdec/config.hpp"
#include "dualdec/coordinator.hpp"
#include "dualdec/graph.hpp"
#include "dualdec/oracle.hpp"
#include "dualdec/problem.hpp"

namespace dualdec {

/// One per-iteration metrics row of the trace CSV.
struct TraceRecord {
    long t = 0;
    double penalized_cost = 0.0;   ///< sum f_i(x_i) + M 1'rho_i
    double raw_cost = 0.0;         ///< sum f_i(x_i)
    double cost_error = 0.0;       ///< penalized_cost - f_star (signed)
    double raw_cost_error = 0.0;   ///< f_star - raw_cost (signed)
    double max_violation = 0.0;    ///< max_s of sum_i g_is(x_i)
    double rho_total = 0.0;        ///< sum_i 1'rho_i
    double mu_consensus = 0.0;     ///< max over edges of |mu_i - mu_j|_2
    double lambda_norm = 0.0;      ///< Euclidean norm of all stacked lambdas
    std::vector<double> rho_per_agent;  ///< 1'rho_i per agent
};

/// Metrics at the current states; t is filled by the caller.
TraceRecord compute_metrics(const std::vector<AgentState>& states, const CoupledProblem& p,
                            const Graph& g, double f_star);

/// Streaming CSV writer; the column layout is documented in a '#' comment
/// line followed by a regular header row. Values use 17 significant digits so
/// parsing reproduces them exactly.
class TraceCsvWriter {
   public:
    TraceCsvWriter(std::ostream& out, int n_agents);
    void write(const TraceRecord& rec);

   private:
    std::ostream& out_;
    int n_agents_;
};

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);

struct RunOutputs {
    std::filesystem::path trace_csv;
    std::filesystem::path summary_txt;
    OracleResult oracle;
    bool m_bound_ok = false;
    bool stepsize_ok = false;
    bool slater_found = false;
    int er_retries = 0;
    long iterations = 0;
    TraceRecord final_record;  ///< meaningful only when iterations > 0
    std::vector<std::string> warnings;
    std::string summary_text;
};

/// Build problem and graph, solve the centralized oracle, run the distributed
/// algorithm, stream trace.csv and write summary.txt into cfg.out_dir.
/// Deterministic given the config. The multi-seed loop is handled by the
/// caller (CLI) by offsetting seeds and out_dir.
RunOutputs run_experiment(const ExperimentConfig& cfg);

/// Derive fig1.dat (t, |raw cost error|), fig2.dat (t, max violation) and
/// fig3.dat (t, per-agent slack totals) next to the chosen output directory.
void emit_plot_data(const std::filesystem::path& trace_csv,
                    const std::filesystem::path& out_dir);

}  // namespace dualdec
