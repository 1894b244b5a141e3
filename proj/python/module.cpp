#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dualdec/config.hpp"
#include "dualdec/coordinator.hpp"
#include "dualdec/errors.hpp"
#include "dualdec/experiment.hpp"
#include "dualdec/graph.hpp"
#include "dualdec/local_solver.hpp"
#include "dualdec/oracle.hpp"
#include "dualdec/problem.hpp"

namespace py = pybind11;
using namespace dualdec;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Duality-based distributed optimization with coupling constraints";

    py::register_exception<InvalidSize>(m, "InvalidSizeError");
    py::register_exception<ConnectivityFailure>(m, "ConnectivityFailureError");
    py::register_exception<DimensionMismatch>(m, "DimensionMismatchError");
    py::register_exception<NegativeSlack>(m, "NegativeSlackError");
    py::register_exception<NonConvergence>(m, "NonConvergenceError");
    py::register_exception<TooLarge>(m, "TooLargeError");
    py::register_exception<ConfigError>(m, "ConfigFileError");

    // --- graph ---
    py::class_<Graph>(m, "Graph")
        .def_readonly("n", &Graph::n)
        .def_readonly("edges", &Graph::edges)
        .def_readonly("adjacency", &Graph::adjacency)
        .def("edge_count", &Graph::edge_count)
        .def("degree", &Graph::degree)
        .def("__repr__", [](const Graph& g) {
            return "<Graph n=" + std::to_string(g.n) + " edges=" +
                   std::to_string(g.edge_count()) + ">";
        });
    m.def("make_graph", &make_graph, py::arg("n"), py::arg("edges"));
    m.def("is_connected", &is_connected);
    m.def("complete", &complete, py::arg("n"));
    m.def("ring", &ring, py::arg("n"));
    m.def(
        "erdos_renyi",
        [](int n, double p, std::uint64_t seed, int max_retries) {
            int retries = 0;
            Graph g = erdos_renyi(n, p, seed, max_retries, &retries);
            return py::make_tuple(g, retries);
        },
        py::arg("n"), py::arg("p"), py::arg("seed"), py::arg("max_retries") = 1000,
        "Returns (graph, rejection_retries)");
    m.def("to_edge_list", &to_edge_list);
    m.def("graph_from_edge_list", &graph_from_edge_list, py::arg("text"), py::arg("n"));

    // --- problem ---
    py::class_<LocalProblem, std::shared_ptr<LocalProblem>>(m, "LocalProblem")
        .def("dim", &LocalProblem::dim)
        .def("coupling_dim", &LocalProblem::coupling_dim)
        .def("cost", &LocalProblem::cost)
        .def("coupling", &LocalProblem::coupling)
        .def("lower", &LocalProblem::lower)
        .def("upper", &LocalProblem::upper);
    py::class_<QuadBoxLinearLocal, LocalProblem, std::shared_ptr<QuadBoxLinearLocal>>(
        m, "QuadBoxLinearLocal")
        .def(py::init<double, double, double, double, Eigen::VectorXd, Eigen::VectorXd>(),
             py::arg("w"), py::arg("r"), py::arg("lo"), py::arg("hi"), py::arg("a"), py::arg("b"))
        .def_property_readonly("w", &QuadBoxLinearLocal::quad_weight)
        .def_property_readonly("r", &QuadBoxLinearLocal::linear_weight)
        .def_property_readonly("a", &QuadBoxLinearLocal::coupling_slope)
        .def_property_readonly("b", &QuadBoxLinearLocal::coupling_offset);

    py::class_<CoupledProblem>(m, "CoupledProblem")
        .def_readonly("locals", &CoupledProblem::locals)
        .def_readonly("s_dim", &CoupledProblem::s_dim)
        .def_readonly("big_m", &CoupledProblem::big_m)
        .def("n", &CoupledProblem::n);
    m.def(
        "make_coupled",
        [](std::vector<std::shared_ptr<const LocalProblem>> locals, double big_m) {
            return make_coupled(std::move(locals), big_m);
        },
        py::arg("locals"), py::arg("big_m"));
    m.def("benchmark_instance", &benchmark_instance, py::arg("n"), py::arg("s_dim") = 1,
          py::arg("seed") = 1);

    py::class_<SlaterResult>(m, "SlaterResult")
        .def_readonly("found", &SlaterResult::found)
        .def_readonly("witness", &SlaterResult::witness)
        .def_readonly("coupling_value", &SlaterResult::coupling_value);
    m.def("slater_check", &slater_check, py::arg("problem"), py::arg("samples") = 200,
          py::arg("seed") = 1);

    m.def("eval_cost", &eval_cost);
    m.def("eval_coupling", &eval_coupling);
    m.def("eval_relaxed_cost", &eval_relaxed_cost);

    // --- local solver ---
    py::class_<SolverSettings>(m, "SolverSettings")
        .def(py::init<>())
        .def_readwrite("tol", &SolverSettings::tol)
        .def_readwrite("max_outer_iters", &SolverSettings::max_outer_iters)
        .def_readwrite("mu_step_scale", &SolverSettings::mu_step_scale)
        .def_readwrite("inner_tol", &SolverSettings::inner_tol)
        .def_readwrite("max_inner_iters", &SolverSettings::max_inner_iters);
    py::class_<LocalSolution>(m, "LocalSolution")
        .def_readonly("x", &LocalSolution::x)
        .def_readonly("rho", &LocalSolution::rho)
        .def_readonly("mu", &LocalSolution::mu)
        .def_readonly("kkt_residual", &LocalSolution::kkt_residual);
    m.def(
        "inner_min",
        [](const LocalProblem& local, const Eigen::VectorXd& mu, const SolverSettings& s) {
            InnerMinResult r = inner_min(local, mu, s);
            return py::make_tuple(r.x, r.value);
        },
        py::arg("local"), py::arg("mu"), py::arg("settings") = SolverSettings{});
    m.def("solve_relaxed_local", &solve_relaxed_local, py::arg("local"), py::arg("d"),
          py::arg("big_m"), py::arg("settings") = SolverSettings{});
    m.def("min_max_violation", &min_max_violation, py::arg("local"), py::arg("d"),
          py::arg("settings") = SolverSettings{});
    m.def("nonrelaxed_feasibility_diagnostic", &nonrelaxed_feasibility_diagnostic,
          py::arg("local"), py::arg("d"), py::arg("settings") = SolverSettings{});
    m.def("kkt_residual_of", &kkt_residual_of);

    // --- coordinator ---
    py::class_<StepSize>(m, "StepSize")
        .def(py::init([](double c, double a, double t0) {
                 return StepSize{c, a, t0};
             }),
             py::arg("c") = 0.5, py::arg("a") = 0.8, py::arg("t0") = 0.0)
        .def_readwrite("c", &StepSize::c)
        .def_readwrite("a", &StepSize::a)
        .def_readwrite("t0", &StepSize::t0)
        .def("at", &StepSize::at);
    m.def("validate_stepsize", &validate_stepsize);

    py::class_<AgentState>(m, "AgentState")
        .def_readonly("x", &AgentState::x)
        .def_readonly("rho", &AgentState::rho)
        .def_readonly("mu", &AgentState::mu)
        .def_readonly("lambda_out", &AgentState::lambda_out);
    py::class_<RoundLog>(m, "RoundLog")
        .def_readonly("t", &RoundLog::t)
        .def_readonly("x", &RoundLog::x)
        .def_readonly("rho", &RoundLog::rho)
        .def_readonly("mu", &RoundLog::mu)
        .def_readonly("messages_sent", &RoundLog::messages_sent);

    m.def("init_states", &init, py::arg("problem"), py::arg("graph"),
          py::arg("lambda0") = std::nullopt);
    m.def("compute_offsets", &compute_offsets, py::arg("states"), py::arg("graph"),
          py::arg("s_dim"));
    m.def(
        "round",
        [](const std::vector<AgentState>& states, const CoupledProblem& p, const Graph& g, int t,
           const StepSize& gamma, const SolverSettings& s) {
            RoundResult r = round(states, p, g, t, gamma, s);
            return py::make_tuple(r.states, r.log);
        },
        py::arg("states"), py::arg("problem"), py::arg("graph"), py::arg("t"), py::arg("gamma"),
        py::arg("settings") = SolverSettings{});
    m.def("run", &run, py::arg("problem"), py::arg("graph"), py::arg("gamma"),
          py::arg("iterations"), py::arg("lambda0") = std::nullopt,
          py::arg("settings") = SolverSettings{}, py::arg("sink") = TraceSink{});

    // --- oracle ---
    py::enum_<OracleMethod>(m, "OracleMethod")
        .value("DualSupergradient", OracleMethod::DualSupergradient)
        .value("Grid", OracleMethod::Grid)
        .value("Analytic", OracleMethod::Analytic);
    py::class_<OracleResult>(m, "OracleResult")
        .def_readonly("f_star", &OracleResult::f_star)
        .def_readonly("mu_star", &OracleResult::mu_star)
        .def_readonly("x_star", &OracleResult::x_star)
        .def_readonly("method", &OracleResult::method)
        .def_readonly("certified_gap", &OracleResult::certified_gap)
        .def_readonly("feasible", &OracleResult::feasible)
        .def_readonly("best_value_history", &OracleResult::best_value_history);
    m.def("eval_dual", &eval_dual, py::arg("problem"), py::arg("mu"),
          py::arg("settings") = SolverSettings{});
    m.def("solve_dual_centralized", &solve_dual_centralized, py::arg("problem"),
          py::arg("tol") = 1e-9, py::arg("max_iters") = 200000);
    m.def("solve_grid", &solve_grid, py::arg("problem"), py::arg("points_per_dim"));
    m.def("check_m_bound", &check_m_bound, py::arg("result"), py::arg("big_m"));

    // --- experiment ---
    py::class_<TraceRecord>(m, "TraceRecord")
        .def_readonly("t", &TraceRecord::t)
        .def_readonly("penalized_cost", &TraceRecord::penalized_cost)
        .def_readonly("raw_cost", &TraceRecord::raw_cost)
        .def_readonly("cost_error", &TraceRecord::cost_error)
        .def_readonly("raw_cost_error", &TraceRecord::raw_cost_error)
        .def_readonly("max_violation", &TraceRecord::max_violation)
        .def_readonly("rho_total", &TraceRecord::rho_total)
        .def_readonly("mu_consensus", &TraceRecord::mu_consensus)
        .def_readonly("lambda_norm", &TraceRecord::lambda_norm)
        .def_readonly("rho_per_agent", &TraceRecord::rho_per_agent);
    m.def("compute_metrics", &compute_metrics, py::arg("states"), py::arg("problem"),
          py::arg("graph"), py::arg("f_star"));

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init<>())
        .def_readwrite("family", &ProblemSpec::family)
        .def_readwrite("n", &ProblemSpec::n)
        .def_readwrite("s_dim", &ProblemSpec::s_dim)
        .def_readwrite("seed", &ProblemSpec::seed)
        .def_readwrite("big_m", &ProblemSpec::big_m)
        .def_readwrite("w", &ProblemSpec::w)
        .def_readwrite("r", &ProblemSpec::r)
        .def_readwrite("lower", &ProblemSpec::lower)
        .def_readwrite("upper", &ProblemSpec::upper)
        .def_readwrite("a", &ProblemSpec::a)
        .def_readwrite("b", &ProblemSpec::b);
    py::class_<GraphSpec>(m, "GraphSpec")
        .def(py::init<>())
        .def_readwrite("family", &GraphSpec::family)
        .def_readwrite("p", &GraphSpec::p)
        .def_readwrite("seed", &GraphSpec::seed)
        .def_readwrite("edges", &GraphSpec::edges);
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("schema_version", &ExperimentConfig::schema_version)
        .def_readwrite("problem", &ExperimentConfig::problem)
        .def_readwrite("graph", &ExperimentConfig::graph)
        .def_readwrite("stepsize", &ExperimentConfig::stepsize)
        .def_readwrite("solver", &ExperimentConfig::solver)
        .def_readwrite("oracle_tol", &ExperimentConfig::oracle_tol)
        .def_readwrite("oracle_max_iters", &ExperimentConfig::oracle_max_iters)
        .def_readwrite("grid_points", &ExperimentConfig::grid_points)
        .def_readwrite("iterations", &ExperimentConfig::iterations)
        .def_readwrite("lambda0", &ExperimentConfig::lambda0)
        .def_readwrite("lambda0_edges", &ExperimentConfig::lambda0_edges)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir)
        .def_readwrite("seeds", &ExperimentConfig::seeds);
    m.def("render_config", &render_config);
    m.def("build_problem", &build_problem);
    m.def(
        "build_graph",
        [](const GraphSpec& spec, int n) {
            int retries = 0;
            Graph g = build_graph(spec, n, &retries);
            return py::make_tuple(g, retries);
        },
        py::arg("spec"), py::arg("n"));

    py::class_<RunOutputs>(m, "RunOutputs")
        .def_readonly("trace_csv", &RunOutputs::trace_csv)
        .def_readonly("summary_txt", &RunOutputs::summary_txt)
        .def_readonly("oracle", &RunOutputs::oracle)
        .def_readonly("m_bound_ok", &RunOutputs::m_bound_ok)
        .def_readonly("stepsize_ok", &RunOutputs::stepsize_ok)
        .def_readonly("slater_found", &RunOutputs::slater_found)
        .def_readonly("er_retries", &RunOutputs::er_retries)
        .def_readonly("final_record", &RunOutputs::final_record)
        .def_readonly("warnings", &RunOutputs::warnings)
        .def_readonly("summary_text", &RunOutputs::summary_text);
    m.def("parse_config_file", &parse_config_file);
    m.def("parse_config_text", &parse_config_text);
    m.def("run_experiment", &run_experiment);
    m.def("emit_plot_data", &emit_plot_data, py::arg("trace_csv"), py::arg("out_dir"));
    m.def("read_trace_csv", &read_trace_csv);

    m.attr("__version__") = "0.1.0";
}
