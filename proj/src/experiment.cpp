#include "dtle/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "dtle/fixtures.hpp"

namespace dtle {

DTLEProblem build_problem(const ExperimentConfig& cfg) {
    if (!cfg.fixture.empty()) return load_fixture(cfg.fixture);
    if (cfg.random) return generate_random_problem(cfg.random->n, cfg.random->rho, cfg.random->seed);
    Mat a = read_matrix_file(cfg.a_file);
    Mat q = read_matrix_file(cfg.q_file);
    return DTLEProblem(std::move(a), std::move(q));
}

std::vector<LocalData> build_locals(const ExperimentConfig& cfg, const DTLEProblem& p) {
    std::vector<LocalData> locals = decompose(p, cfg.m, cfg.sizes, cfg.safety);
    if (cfg.alphas) {
        if (cfg.alphas->size() != locals.size())
            throw ConfigError("steps.alphas length must equal partition.m");
        for (std::size_t i = 0; i < locals.size(); ++i) {
            if (!((*cfg.alphas)[i] > 0.0))
                throw ConfigError("steps.alphas entries must be positive");
            locals[i].alpha = (*cfg.alphas)[i];
        }
    }
    for (auto& d : locals) d.alpha *= cfg.scale;
    return locals;
}

TopologySchedule build_schedule(const ExperimentConfig& cfg, std::size_t m) {
    if (cfg.family == "uniformly-connected")
        return schedule_uniformly_connected(m, cfg.B, cfg.schedule_seed);

    std::vector<Graph> graphs;
    std::size_t random_idx = 0;
    for (const GraphSpec& spec : cfg.graphs) {
        EdgeSet edges;
        if (spec.is_named) {
            if (spec.name == "ring")
                edges = edges_ring(m);
            else if (spec.name == "path")
                edges = edges_path(m);
            else if (spec.name == "star")
                edges = edges_star(m);
            else if (spec.name == "complete")
                edges = edges_complete(m);
            else if (spec.name == "random")
                edges = edges_random_connected(m, m / 2, cfg.schedule_seed + 1000 + random_idx++);
            else
                throw ConfigError("unknown graph name '" + spec.name + "'");
        } else {
            edges = spec.edges;
        }
        graphs.push_back(metropolis_adjacency(m, edges));
    }
    return schedule_finite_connected(std::move(graphs), cfg.schedule_seed);
}

unsigned env_thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DTLE_NET_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Mat consensus_mean_x(const SolverState& state) {
    Mat mean(state.agents.front().X.rows(), state.agents.front().X.cols());
    for (const auto& a : state.agents) mean += a.X;
    mean *= 1.0 / static_cast<double>(state.agents.size());
    return mean;
}

// Default fit window: the last 75% of recorded rounds that sit above the
// numerical floor (the transient is not covered by the rate claim).
std::optional<RateEstimate> fit_rate(const Trajectory& traj, double floor) {
    std::vector<long> usable;
    for (const auto& r : traj.records)
        if (r.residual_max > 10.0 * floor) usable.push_back(r.k);
    if (usable.size() < 10) return std::nullopt;
    const long k_start = usable[usable.size() / 4];
    try {
        return estimate_linear_rate(traj, {k_start, usable.back()}, floor);
    } catch (const RateEstimationError&) {
        return std::nullopt;
    }
}

}  // namespace

void write_summary(std::ostream& os, const SummaryReport& s) {
    os << "final_residual_max=" << fmt(s.final_residual_max) << '\n';
    os << "final_disagreement=" << fmt(s.final_disagreement) << '\n';
    os << "rounds=" << s.rounds << '\n';
    os << "termination=" << s.termination << '\n';
    if (s.rate) {
        os << "rate_slope=" << fmt(s.rate->slope) << '\n';
        os << "rate_r_squared=" << fmt(s.rate->r_squared) << '\n';
        os << "rate_window=" << s.rate->k_start << ".." << s.rate->k_end << '\n';
    } else {
        os << "rate=unavailable\n";
    }
    if (s.min_eig_consensus_x)
        os << "min_eig_consensus_X=" << fmt(*s.min_eig_consensus_x) << '\n';
    if (s.oracle_unique)
        os << "oracle_relative_error=" << fmt(s.oracle_relative_error.value()) << '\n';
    else
        os << "oracle=non-unique\n";
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const DTLEProblem problem = build_problem(cfg);
    const std::vector<LocalData> locals = build_locals(cfg, problem);
    const TopologySchedule schedule = build_schedule(cfg, locals.size());

    std::optional<CentralizedSolution> oracle;
    try {
        oracle = solve_centralized(problem);
    } catch (const NoUniqueSolutionError&) {
    } catch (const ParameterError&) {
        // n beyond the dense oracle limit; run without a reference
    }

    RunOptions opts;
    opts.max_iters = cfg.max_iters;
    opts.tol = cfg.tol;
    opts.stride = cfg.stride;
    opts.init = cfg.init == "random" ? InitRule::SeededRandom : InitRule::Zeros;
    opts.init_scale = cfg.init_scale;
    opts.init_seed = cfg.init_seed;
    opts.threads = env_thread_cap();
    opts.trace_elements = cfg.trace_elements;
    if (oracle)
        opts.reference = AgentEstimate{oracle->X_star, problem.A * oracle->X_star};

    ExperimentResult result;
    result.summary.oracle_unique = oracle.has_value();
    try {
        result.trajectory = run(problem, locals, schedule, opts);
    } catch (const DivergenceError& e) {
        result.exit_code = 3;
        result.summary.termination = "divergence";
        result.summary.rounds = e.round;
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            std::ofstream sf(cfg.out_dir + "/summary.txt");
            write_summary(sf, result.summary);
        }
        return result;
    }

    const Trajectory& traj = result.trajectory;
    const MetricRecord& last = traj.records.back();
    result.summary.final_residual_max = last.residual_max;
    result.summary.final_disagreement = last.disagreement;
    result.summary.rounds = traj.rounds;
    const bool converged = traj.stop == StopReason::Tolerance;
    result.summary.termination = converged ? "converged" : "max_iters";
    result.exit_code = converged ? 0 : 2;

    const double floor = 1e-12 * (1.0 + frobenius_norm(problem.Q));
    result.summary.rate = fit_rate(traj, floor);

    result.solution_x = consensus_mean_x(traj.final_state);
    {
        Mat sym = (result.solution_x + result.solution_x.transpose()) * 0.5;
        const Vec ev = sym_eigenvalues(sym);
        result.summary.min_eig_consensus_x = ev[0];
    }
    if (oracle) {
        const double denom = std::max(frobenius_norm(oracle->X_star), 1e-30);
        result.summary.oracle_relative_error =
            frobenius_norm(result.solution_x - oracle->X_star) / denom;
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        {
            std::ofstream tf(cfg.out_dir + "/trajectory.csv", std::ios::binary);
            if (!tf) throw IoError("cannot write " + cfg.out_dir + "/trajectory.csv");
            write_trajectory_csv(tf, traj);
        }
        {
            std::ofstream sf(cfg.out_dir + "/summary.txt", std::ios::binary);
            write_summary(sf, result.summary);
        }
        write_matrix_file(cfg.out_dir + "/solution_X.txt", result.solution_x);
    }
    return result;
}

}  // namespace dtle
