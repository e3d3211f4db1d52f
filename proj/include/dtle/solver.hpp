#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "dtle/network.hpp"
#include "dtle/problem.hpp"

namespace dtle {

struct SolverState {
    long k = 0;
    std::vector<AgentEstimate> agents;
    std::vector<LocalData> locals;
};

struct MetricRecord {
    long k = 0;
    double residual_mean = 0.0;
    double residual_max = 0.0;
    double disagreement = 0.0;
    double consensus_error = 0.0;
    double objective = 0.0;
    std::optional<double> lyapunov_distance;
    double ergodic_bound_lhs = 0.0;
    std::vector<double> trace;  // optional per-element trace (first agent's X row 1)
};

enum class StopReason { Tolerance, MaxIters };

struct Trajectory {
    std::vector<MetricRecord> records;
    SolverState final_state;
    std::vector<AgentEstimate> running_means;  // time averages Zbar_{i,k}
    StopReason stop = StopReason::MaxIters;
    long rounds = 0;
};

struct RateEstimate {
    double slope = 0.0;
    double r_squared = 0.0;
    long k_start = 0;
    long k_end = 0;
    bool linear_rate_verdict() const { return slope < 0.0 && r_squared >= 0.95; }
};

enum class InitRule { Zeros, SeededRandom };

struct RunOptions {
    long max_iters = 6000;
    double tol = 1e-8;
    long stride = 10;
    InitRule init = InitRule::Zeros;
    double init_scale = 1.0;
    std::uint64_t init_seed = 0;
    std::optional<AgentEstimate> reference;  // (X*, Y*) for Lyapunov metrics
    unsigned threads = 1;
    bool trace_elements = false;
};

SolverState init_state(const std::vector<LocalData>& locals, InitRule rule,
                       double scale = 1.0, std::uint64_t seed = 0);

// One synchronous round: every agent reads only round-k values.
//   Z_{i,k+1} = Z_{i,k} - alpha_i dZ_i - (alpha_i/2) sum_j a_ij (Z_i - Z_j)
SolverState step(const SolverState& state, const Graph& g, unsigned threads = 1);

// Same round through the mixing form Z_{i,k+1} = sum_j w_ij Z_j - alpha_i dZ_i.
// Kept as an independent route for the equivalence check.
SolverState step_mixing(const SolverState& state, const MixingMatrix& w);

Trajectory run(const DTLEProblem& problem, const std::vector<LocalData>& locals,
               const TopologySchedule& schedule, const RunOptions& opts);

// ||A X A' - X + Q||_F
double residual(const DTLEProblem& problem, const Mat& x);

// D(Xbar) = sum_i || sum_j (X_i - X_j) ||_F
double disagreement(const SolverState& state);

// max_i ||Z_i - H||_F with H the agent mean.
double consensus_error(const SolverState& state);

// sqrt( sum_i alpha_i^{-1} (||X_i - X*||_F^2 + ||Y_i - Y*||_F^2) )
double lyapunov_distance(const SolverState& state, const AgentEstimate& reference);

// Least-squares fit of log(residual_max) over records with k in
// [window.first, window.second] and residual_max above 10x the given
// numerical floor. Needs at least 10 usable records.
RateEstimate estimate_linear_rate(const Trajectory& traj, std::pair<long, long> window,
                                  double floor);

// Phi(k,s) = W_s W_{s+1} ... W_k (ordered product), ws[0] being round s.
Mat transition_matrix(const std::vector<MixingMatrix>& ws, std::size_t s, std::size_t k);

// Geometric mixing bound on |Phi(k,s)_ij - 1/m| with B0 = (m-1)B:
//   2 (1 + eta^{-B0}) / (1 - eta^{B0}) * (1 - eta^{B0})^{gap/B0}
double phi_bound(double eta, std::size_t B, std::size_t m, double gap);

// CSV schema: k,residual_mean,residual_max,disagreement,consensus_error,
// objective,lyapunov_distance,ergodic_bound_lhs (empty field when the
// Lyapunov reference is absent), plus trace columns when enabled.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace dtle
