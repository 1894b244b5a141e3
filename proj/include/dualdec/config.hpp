#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dualdec/coordinator.hpp"
#include "dualdec/graph.hpp"
#include "dualdec/local_solver.hpp"
#include "dualdec/problem.hpp"

namespace dualdec {

struct ProblemSpec {
    std::string family = "quadratic-benchmark";  ///< or "explicit"
    int n = 0;
    int s_dim = 1;
    std::uint64_t seed = 1;
    double big_m = 1200.0;
    // explicit family: per-agent scalars and per-agent coupling rows
    std::vector<double> w, r, lower, upper;
    std::vector<std::vector<double>> a, b;
};

struct GraphSpec {
    std::string family = "erdos-renyi";  ///< or "complete", "ring", "edge-list"
    double p = 0.2;
    std::uint64_t seed = 1;
    std::string edges;  ///< edge-list text block, one "i j" per line, 1-based
};

/// Everything a run needs, parsed from one sectioned key = value file.
struct ExperimentConfig {
    int schema_version = 1;
    ProblemSpec problem;
    GraphSpec graph;
    StepSize stepsize;
    SolverSettings solver;
    double oracle_tol = 1e-9;
    int oracle_max_iters = 200000;
    int grid_points = 2001;
    int iterations = 10000;
    std::string lambda0 = "zeros";  ///< "zeros" or "edges" (with lambda0_edges block)
    std::string lambda0_edges;      ///< lines "i j v_1 .. v_S", unlisted edges zero
    std::string out_dir = "out";
    int seeds = 1;  ///< simple multi-seed loop: seeds k = 0..seeds-1 offset both seeds
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Canonical text form of the effective config; parses back to an equal value.
std::string render_config(const ExperimentConfig& cfg);

CoupledProblem build_problem(const ProblemSpec& spec);
Graph build_graph(const GraphSpec& spec, int n, int* er_retries = nullptr);
std::optional<std::vector<Eigen::VectorXd>> build_lambda0(const ExperimentConfig& cfg,
                                                          const Graph& g, int s_dim);

}  // namespace dualdec
