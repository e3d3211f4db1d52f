#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "dtle/config.hpp"
#include "dtle/oracle.hpp"
#include "dtle/solver.hpp"

namespace dtle {

struct SummaryReport {
    double final_residual_max = 0.0;
    double final_disagreement = 0.0;
    long rounds = 0;
    std::string termination;  // converged | max_iters | divergence
    std::optional<RateEstimate> rate;
    std::optional<double> min_eig_consensus_x;
    std::optional<double> oracle_relative_error;  // vs the consensus mean X
    bool oracle_unique = false;
};

struct ExperimentResult {
    int exit_code = 0;  // 0 converged, 2 max-iters, 3 divergence
    Trajectory trajectory;
    SummaryReport summary;
    Mat solution_x;  // consensus mean of the final X_i
};

// Assemble problem, partition, step sizes, and schedule from a config.
DTLEProblem build_problem(const ExperimentConfig& cfg);
std::vector<LocalData> build_locals(const ExperimentConfig& cfg, const DTLEProblem& p);
TopologySchedule build_schedule(const ExperimentConfig& cfg, std::size_t m);

// Runs the experiment and, when out_dir is nonempty, writes trajectory.csv,
// summary.txt, and solution_X.txt there.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_summary(std::ostream& os, const SummaryReport& s);

// Thread cap from DTLE_NET_THREADS (default: all cores).
unsigned env_thread_cap();

}  // namespace dtle
