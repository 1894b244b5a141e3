#include "dualdec/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dualdec/errors.hpp"

namespace dualdec {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

TraceRecord compute_metrics(const std::vector<AgentState>& states, const CoupledProblem& p,
                            const Graph& g, double f_star) {
    TraceRecord rec;
    rec.rho_per_agent.resize(states.size(), 0.0);

    Eigen::VectorXd coupling = Eigen::VectorXd::Zero(p.s_dim);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const double fi = p.locals[i]->cost(states[i].x);
        const double rho_i = states[i].rho.sum();
        rec.raw_cost += fi;
        rec.penalized_cost += fi + p.big_m * rho_i;
        rec.rho_total += rho_i;
        rec.rho_per_agent[i] = rho_i;
        coupling += p.locals[i]->coupling(states[i].x);
    }
    rec.max_violation = coupling.maxCoeff();
    rec.cost_error = rec.penalized_cost - f_star;
    rec.raw_cost_error = f_star - rec.raw_cost;

    for (auto [i, j] : g.edges)
        rec.mu_consensus = std::max(rec.mu_consensus, (states[i].mu - states[j].mu).norm());

    double lambda_sq = 0.0;
    for (const auto& st : states)
        for (const auto& lam : st.lambda_out) lambda_sq += lam.squaredNorm();
    rec.lambda_norm = std::sqrt(lambda_sq);
    return rec;
}

TraceCsvWriter::TraceCsvWriter(std::ostream& out, int n_agents)
    : out_(out), n_agents_(n_agents) {
    out_ << "# dualdec trace v1: per-iteration metrics; rho_agent_i holds 1'rho_i\n";
    out_ << "t,penalized_cost,raw_cost,cost_error,raw_cost_error,max_violation,rho_total,"
            "mu_consensus,lambda_norm";
    for (int i = 1; i <= n_agents_; ++i) out_ << ",rho_agent_" << i;
    out_ << "\n";
}

void TraceCsvWriter::write(const TraceRecord& rec) {
    out_ << rec.t << ',' << fmt(rec.penalized_cost) << ',' << fmt(rec.raw_cost) << ','
         << fmt(rec.cost_error) << ',' << fmt(rec.raw_cost_error) << ','
         << fmt(rec.max_violation) << ',' << fmt(rec.rho_total) << ',' << fmt(rec.mu_consensus)
         << ',' << fmt(rec.lambda_norm);
    for (double v : rec.rho_per_agent) out_ << ',' << fmt(v);
    out_ << '\n';
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace '" + path.string() + "'");
    std::vector<TraceRecord> records;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column-name row
            continue;
        }
        TraceRecord rec;
        std::istringstream ls(line);
        std::string cell;
        auto next = [&]() -> double {
            if (!std::getline(ls, cell, ','))
                throw IoError("trace '" + path.string() + "': short row '" + line + "'");
            return std::strtod(cell.c_str(), nullptr);
        };
        rec.t = static_cast<long>(next());
        rec.penalized_cost = next();
        rec.raw_cost = next();
        rec.cost_error = next();
        rec.raw_cost_error = next();
        rec.max_violation = next();
        rec.rho_total = next();
        rec.mu_consensus = next();
        rec.lambda_norm = next();
        while (std::getline(ls, cell, ','))
            rec.rho_per_agent.push_back(std::strtod(cell.c_str(), nullptr));
        records.push_back(std::move(rec));
    }
    return records;
}

RunOutputs run_experiment(const ExperimentConfig& cfg) {
    RunOutputs out;
    out.iterations = cfg.iterations;

    const CoupledProblem problem = build_problem(cfg.problem);
    const Graph graph = build_graph(cfg.graph, problem.n(), &out.er_retries);

    out.stepsize_ok = validate_stepsize(cfg.stepsize);
    if (!out.stepsize_ok)
        out.warnings.push_back("step-size a = " + fmt(cfg.stepsize.a) +
                               " is outside (0.5, 1]; diminishing conditions violated");

    const SlaterResult slater = slater_check(problem, 200, cfg.problem.seed);
    out.slater_found = slater.found;
    if (!slater.found)
        out.warnings.push_back(
            "no strictly feasible coupling point found; constraint qualification unverified");

    out.oracle = solve_dual_centralized(problem, cfg.oracle_tol, cfg.oracle_max_iters);
    out.m_bound_ok = check_m_bound(out.oracle, problem.big_m);
    if (!out.m_bound_ok)
        out.warnings.push_back("dual solution touches the multiplier bound M = " +
                               fmt(problem.big_m) +
                               "; relaxed and original problems may differ");

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "'");
    out.trace_csv = std::filesystem::path(cfg.out_dir) / "trace.csv";
    out.summary_txt = std::filesystem::path(cfg.out_dir) / "summary.txt";

    std::ofstream trace(out.trace_csv);
    if (!trace) throw IoError("cannot open '" + out.trace_csv.string() + "' for writing");
    TraceCsvWriter writer(trace, problem.n());

    const double f_star = out.oracle.f_star;
    TraceRecord last;
    const TraceSink sink = [&](const RoundLog& log, const std::vector<AgentState>& states) {
        TraceRecord rec = compute_metrics(states, problem, graph, f_star);
        rec.t = log.t;
        writer.write(rec);
        last = std::move(rec);
    };

    const auto lambda0 = build_lambda0(cfg, graph, problem.s_dim);
    run(problem, graph, cfg.stepsize, cfg.iterations, lambda0, cfg.solver, sink);
    trace.flush();
    if (!trace) throw IoError("failed writing '" + out.trace_csv.string() + "'");
    out.final_record = last;

    std::ostringstream summary;
    summary << "# dualdec run summary (effective config followed by results)\n";
    summary << render_config(cfg);
    summary << "\n[result]\n";
    summary << "f_star = " << fmt(out.oracle.f_star) << "\n";
    summary << "mu_star = [";
    for (int s = 0; s < out.oracle.mu_star.size(); ++s)
        summary << (s ? ", " : "") << fmt(out.oracle.mu_star[s]);
    summary << "]\n";
    summary << "mu_star_inf_norm = "
            << fmt(out.oracle.mu_star.size() ? out.oracle.mu_star.cwiseAbs().maxCoeff() : 0.0)
            << "\n";
    summary << "oracle_certified_gap = " << fmt(out.oracle.certified_gap) << "\n";
    summary << "m_bound_ok = " << (out.m_bound_ok ? "true" : "false") << "\n";
    summary << "stepsize_valid = " << (out.stepsize_ok ? "true" : "false") << "\n";
    summary << "slater_found = " << (out.slater_found ? "true" : "false") << "\n";
    summary << "er_retries = " << out.er_retries << "\n";
    summary << "iterations = " << cfg.iterations << "\n";
    if (cfg.iterations > 0) {
        summary << "final_penalized_cost = " << fmt(last.penalized_cost) << "\n";
        summary << "final_cost_error = " << fmt(last.cost_error) << "\n";
        summary << "final_raw_cost_error = " << fmt(last.raw_cost_error) << "\n";
        summary << "final_max_violation = " << fmt(last.max_violation) << "\n";
        summary << "final_rho_total = " << fmt(last.rho_total) << "\n";
        summary << "final_mu_consensus = " << fmt(last.mu_consensus) << "\n";
    }
    for (const std::string& w : out.warnings) summary << "warning = \"" << w << "\"\n";
    out.summary_text = summary.str();

    std::ofstream sum(out.summary_txt);
    if (!sum) throw IoError("cannot open '" + out.summary_txt.string() + "' for writing");
    sum << out.summary_text;
    return out;
}

void emit_plot_data(const std::filesystem::path& trace_csv,
                    const std::filesystem::path& out_dir) {
    const std::vector<TraceRecord> records = read_trace_csv(trace_csv);

    std::ofstream fig1(out_dir / "fig1.dat"), fig2(out_dir / "fig2.dat"),
        fig3(out_dir / "fig3.dat");
    if (!fig1 || !fig2 || !fig3)
        throw IoError("cannot open figure data files under '" + out_dir.string() + "'");

    // The cost-error series is signed and not monotone; the log-scale plot
    // column is its absolute value.
    fig1 << "# t  abs_raw_cost_error\n";
    fig2 << "# t  max_violation\n";
    fig3 << "# t  rho_agent_1..n\n";
    for (const TraceRecord& rec : records) {
        fig1 << rec.t << ' ' << fmt(std::abs(rec.raw_cost_error)) << '\n';
        fig2 << rec.t << ' ' << fmt(rec.max_violation) << '\n';
        fig3 << rec.t;
        for (double v : rec.rho_per_agent) fig3 << ' ' << fmt(v);
        fig3 << '\n';
    }
}

}  // namespace dualdec
