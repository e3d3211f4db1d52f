#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dtle/experiment.hpp"
#include "dtle/fixtures.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override) {
    dtle::ExperimentConfig cfg;
    try {
        cfg = dtle::ExperimentConfig::from_file(config_path);
    } catch (const dtle::ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return 1;
    }
    if (!out_override.empty()) cfg.out_dir = out_override;
    try {
        const dtle::ExperimentResult res = dtle::run_experiment(cfg);
        dtle::write_summary(std::cout, res.summary);
        std::cout << "output_dir=" << cfg.out_dir << "\n";
        return res.exit_code;
    } catch (const dtle::ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return 1;
    } catch (const dtle::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_oracle(const std::string& config_path) {
    dtle::ExperimentConfig cfg;
    try {
        cfg = dtle::ExperimentConfig::from_file(config_path);
    } catch (const dtle::ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return 1;
    }
    try {
        const dtle::DTLEProblem p = dtle::build_problem(cfg);
        const dtle::CentralizedSolution sol = dtle::solve_centralized(p);
        dtle::write_matrix(std::cout, sol.X_star);
        std::fprintf(stderr, "residual=%.17g\n", sol.residual);
        return 0;
    } catch (const dtle::NoUniqueSolutionError& e) {
        std::cerr << "non-unique: " << e.what() << "\n";
        return 2;
    } catch (const dtle::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed discrete-time Lyapunov equation solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment from a TOML config");
    run_cmd->add_option("config", config_path, "Path to config.toml")->required();
    run_cmd->add_option("--out", out_dir, "Output directory (overrides config)");

    auto* fixtures_cmd = app.add_subcommand("fixtures", "List bundled problem fixtures");

    std::string oracle_config;
    auto* oracle_cmd = app.add_subcommand("oracle", "Centralized solve only; X* to stdout");
    oracle_cmd->add_option("config", oracle_config, "Path to config.toml")->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) return cmd_run(config_path, out_dir);
    if (fixtures_cmd->parsed()) {
        for (const auto& f : dtle::fixture_names()) std::cout << f << "\n";
        return 0;
    }
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_config);
    return 1;
}
