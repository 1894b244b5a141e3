// Command line front end: run / oracle / validate over a config file, with
// flag overrides. Exit codes: 0 success, 2 config error, 3 solver failure,
// 4 IO failure, 1 anything else. Warnings never change the exit code.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "dualdec/config.hpp"
#include "dualdec/errors.hpp"
#include "dualdec/experiment.hpp"
#include "dualdec/oracle.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<long> seed;
    std::optional<long> iters;
    std::optional<std::string> out_dir;
    std::optional<double> big_m;
    std::optional<double> step_c;
    std::optional<double> step_a;
    int verbosity = 0;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "Path to the experiment config file")
        ->required();
    cmd->add_option("--seed", o.seed, "Override problem and graph seeds");
    cmd->add_option("--iters", o.iters, "Override the iteration count");
    cmd->add_option("--out", o.out_dir, "Override the output directory");
    cmd->add_option("--big-m", o.big_m, "Override the relaxation bound M");
    cmd->add_option("--step-c", o.step_c, "Override the step-size scale c");
    cmd->add_option("--step-a", o.step_a, "Override the step-size exponent a");
    cmd->add_flag("-v", o.verbosity, "Verbose progress on stderr (repeat for more)");
}

dualdec::ExperimentConfig load(const Overrides& o) {
    dualdec::ExperimentConfig cfg = dualdec::parse_config_file(o.config_path);
    if (o.seed) {
        cfg.problem.seed = static_cast<std::uint64_t>(*o.seed);
        cfg.graph.seed = static_cast<std::uint64_t>(*o.seed);
    }
    if (o.iters) {
        if (*o.iters < 0) throw dualdec::ConfigError("--iters must be >= 0");
        cfg.iterations = static_cast<int>(*o.iters);
    }
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.big_m) {
        if (!(*o.big_m > 0)) throw dualdec::ConfigError("--big-m must be > 0");
        cfg.problem.big_m = *o.big_m;
    }
    if (o.step_c) cfg.stepsize.c = *o.step_c;
    if (o.step_a) cfg.stepsize.a = *o.step_a;
    return cfg;
}

int cmd_run(const Overrides& o) {
    const dualdec::ExperimentConfig base = load(o);
    for (int k = 0; k < base.seeds; ++k) {
        dualdec::ExperimentConfig cfg = base;
        cfg.problem.seed = base.problem.seed + static_cast<std::uint64_t>(k);
        cfg.graph.seed = base.graph.seed + static_cast<std::uint64_t>(k);
        cfg.seeds = 1;
        if (base.seeds > 1)
            cfg.out_dir = (std::filesystem::path(base.out_dir) /
                           ("seed_" + std::to_string(cfg.problem.seed)))
                              .string();
        if (o.verbosity >= 1)
            std::cerr << "run: seed " << cfg.problem.seed << " -> " << cfg.out_dir << "\n";
        dualdec::RunOutputs out = dualdec::run_experiment(cfg);
        dualdec::emit_plot_data(out.trace_csv, cfg.out_dir);
        std::cout << out.summary_text;
        if (o.verbosity >= 1)
            std::cerr << "run: wrote " << out.trace_csv.string() << " and figure data\n";
    }
    return 0;
}

int cmd_oracle(const Overrides& o) {
    const dualdec::ExperimentConfig cfg = load(o);
    const dualdec::CoupledProblem problem = dualdec::build_problem(cfg.problem);

    const dualdec::OracleResult dual =
        dualdec::solve_dual_centralized(problem, cfg.oracle_tol, cfg.oracle_max_iters);
    std::cout << "dual_supergradient.f_star = " << dual.f_star << "\n";
    std::cout << "dual_supergradient.mu_star = [";
    for (int s = 0; s < dual.mu_star.size(); ++s)
        std::cout << (s ? ", " : "") << dual.mu_star[s];
    std::cout << "]\n";
    std::cout << "dual_supergradient.mu_star_inf_norm = " << dual.mu_star.cwiseAbs().maxCoeff()
              << "\n";
    std::cout << "dual_supergradient.certified_gap = " << dual.certified_gap << "\n";
    std::cout << "m_bound_ok = " << (dualdec::check_m_bound(dual, problem.big_m) ? "true" : "false")
              << "\n";

    try {
        const dualdec::OracleResult grid = dualdec::solve_grid(problem, cfg.grid_points);
        if (grid.feasible) {
            std::cout << "grid.f_star = " << grid.f_star << "\n";
            std::cout << "grid.gap_to_dual = " << std::abs(grid.f_star - dual.f_star) << "\n";
        } else {
            std::cout << "grid.f_star = infeasible\n";
        }
    } catch (const dualdec::TooLarge&) {
        std::cout << "grid = skipped (instance exceeds the N <= 4, total dim <= 4 bound)\n";
    }
    return 0;
}

int cmd_validate(const Overrides& o) {
    const dualdec::ExperimentConfig cfg = load(o);
    const dualdec::CoupledProblem problem = dualdec::build_problem(cfg.problem);

    const dualdec::SlaterResult slater = dualdec::slater_check(problem, 200, cfg.problem.seed);
    if (slater.found) {
        std::cout << "pass: strictly feasible coupling point found (total coupling = [";
        for (int s = 0; s < slater.coupling_value.size(); ++s)
            std::cout << (s ? ", " : "") << slater.coupling_value[s];
        std::cout << "])\n";
    } else {
        std::cout << "warn: no strictly feasible coupling point found within the sample budget\n";
    }

    if (dualdec::validate_stepsize(cfg.stepsize)) {
        std::cout << "pass: step-size family member satisfies the diminishing conditions\n";
    } else {
        std::cout << "warn: step-size a = " << cfg.stepsize.a
                  << " outside (0.5, 1]; diminishing conditions violated\n";
    }

    try {
        int retries = 0;
        const dualdec::Graph g = dualdec::build_graph(cfg.graph, problem.n(), &retries);
        if (dualdec::is_connected(g)) {
            std::cout << "pass: graph connected (" << g.edge_count() << " edges";
            if (retries > 0) std::cout << ", " << retries << " rejection retries";
            std::cout << ")\n";
        } else {
            std::cout << "warn: graph is not connected\n";
        }
    } catch (const dualdec::ConnectivityFailure& e) {
        std::cout << "warn: " << e.what() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relaxation-and-duality distributed optimization simulator"};
    app.require_subcommand(1);

    Overrides o;
    CLI::App* run = app.add_subcommand("run", "Run the distributed algorithm and write traces");
    CLI::App* oracle = app.add_subcommand("oracle", "Solve the centralized reference problems");
    CLI::App* validate = app.add_subcommand("validate", "Check problem and config assumptions");
    add_common(run, o);
    add_common(oracle, o);
    add_common(validate, o);

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(o);
        if (oracle->parsed()) return cmd_oracle(o);
        return cmd_validate(o);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints usage or help text
        return code == 0 ? 0 : 2;      // bad flags are config errors
    } catch (const dualdec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const dualdec::NonConvergence& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const dualdec::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
