#include "dtle/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "dtle/rng.hpp"

namespace dtle {

SolverState init_state(const std::vector<LocalData>& locals, InitRule rule, double scale,
                       std::uint64_t seed) {
    if (locals.empty()) throw ParameterError("init_state: no agents");
    const std::size_t n = locals.front().A_ri.cols();
    SolverState s;
    s.k = 0;
    s.locals = locals;
    s.agents.reserve(locals.size());
    CounterRng rng(seed, /*stream=*/4);
    for (std::size_t i = 0; i < locals.size(); ++i) {
        AgentEstimate e{Mat(n, n), Mat(n, n)};
        if (rule == InitRule::SeededRandom) {
            for (double& v : e.X.data()) v = rng.uniform(-scale, scale);
            for (double& v : e.Y.data()) v = rng.uniform(-scale, scale);
        }
        s.agents.push_back(std::move(e));
    }
    return s;
}

namespace {

AgentEstimate agent_update(const SolverState& state, const Graph& g, std::size_t i) {
    const LocalData& d = state.locals[i];
    const AgentEstimate& e = state.agents[i];
    auto [dx, dy] = local_gradients(d, e);

    Mat sum_x(e.X.rows(), e.X.cols());
    Mat sum_y(e.Y.rows(), e.Y.cols());
    for (std::size_t j = 0; j < g.m; ++j) {
        if (j == i) continue;
        const double a = g.adjacency(i, j);
        if (a == 0.0) continue;
        sum_x += (e.X - state.agents[j].X) * a;
        sum_y += (e.Y - state.agents[j].Y) * a;
    }
    AgentEstimate out;
    out.X = e.X - dx * d.alpha - sum_x * (0.5 * d.alpha);
    out.Y = e.Y - dy * d.alpha - sum_y * (0.5 * d.alpha);
    return out;
}

}  // namespace

SolverState step(const SolverState& state, const Graph& g, unsigned threads) {
    if (g.m != state.agents.size()) throw DimensionError("step: graph size != agent count");
    const std::size_t m = state.agents.size();
    SolverState next;
    next.k = state.k + 1;
    next.locals = state.locals;
    next.agents.resize(m);

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(m)));
    if (workers == 1) {
        for (std::size_t i = 0; i < m; ++i) next.agents[i] = agent_update(state, g, i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                for (std::size_t i = w; i < m; i += workers)
                    next.agents[i] = agent_update(state, g, i);
            });
        }
        for (auto& t : pool) t.join();
    }
    return next;
}

SolverState step_mixing(const SolverState& state, const MixingMatrix& w) {
    const std::size_t m = state.agents.size();
    if (w.W.rows() != m) throw DimensionError("step_mixing: W size != agent count");
    SolverState next;
    next.k = state.k + 1;
    next.locals = state.locals;
    next.agents.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const LocalData& d = state.locals[i];
        auto [dx, dy] = local_gradients(d, state.agents[i]);
        Mat x(state.agents[i].X.rows(), state.agents[i].X.cols());
        Mat y = x;
        for (std::size_t j = 0; j < m; ++j) {
            const double wij = w.W(i, j);
            if (wij == 0.0) continue;
            x += state.agents[j].X * wij;
            y += state.agents[j].Y * wij;
        }
        next.agents[i].X = x - dx * d.alpha;
        next.agents[i].Y = y - dy * d.alpha;
    }
    return next;
}

double residual(const DTLEProblem& problem, const Mat& x) {
    return frobenius_norm(problem.A * x * problem.A.transpose() - x + problem.Q);
}

double disagreement(const SolverState& state) {
    const std::size_t m = state.agents.size();
    Mat sum(state.agents.front().X.rows(), state.agents.front().X.cols());
    for (const auto& a : state.agents) sum += a.X;
    double d = 0.0;
    for (const auto& a : state.agents)
        d += frobenius_norm(a.X * static_cast<double>(m) - sum);
    return d;
}

double consensus_error(const SolverState& state) {
    const std::size_t m = state.agents.size();
    const std::size_t n = state.agents.front().X.rows();
    Mat hx(n, n), hy(n, n);
    for (const auto& a : state.agents) {
        hx += a.X;
        hy += a.Y;
    }
    hx *= 1.0 / static_cast<double>(m);
    hy *= 1.0 / static_cast<double>(m);
    double worst = 0.0;
    for (const auto& a : state.agents) {
        const double ex = frobenius_norm(a.X - hx);
        const double ey = frobenius_norm(a.Y - hy);
        worst = std::max(worst, std::sqrt(ex * ex + ey * ey));
    }
    return worst;
}

double lyapunov_distance(const SolverState& state, const AgentEstimate& reference) {
    double s = 0.0;
    for (std::size_t i = 0; i < state.agents.size(); ++i) {
        const double dx = frobenius_norm(state.agents[i].X - reference.X);
        const double dy = frobenius_norm(state.agents[i].Y - reference.Y);
        s += (dx * dx + dy * dy) / state.locals[i].alpha;
    }
    return std::sqrt(s);
}

namespace {

double ergodic_lhs(const std::vector<LocalData>& locals,
                   const std::vector<AgentEstimate>& means) {
    double s = 0.0;
    for (std::size_t i = 0; i < locals.size(); ++i)
        s += (1.0 - locals[i].alpha * locals[i].xi) * local_objective(locals[i], means[i]);
    return s;
}

MetricRecord make_record(const DTLEProblem& problem, const SolverState& state,
                         const std::vector<AgentEstimate>& means, const RunOptions& opts) {
    MetricRecord r;
    r.k = state.k;
    double rsum = 0.0, rmax = 0.0, obj = 0.0;
    for (std::size_t i = 0; i < state.agents.size(); ++i) {
        const double res = residual(problem, state.agents[i].X);
        rsum += res;
        rmax = std::max(rmax, res);
        obj += local_objective(state.locals[i], state.agents[i]);
    }
    r.residual_mean = rsum / static_cast<double>(state.agents.size());
    r.residual_max = rmax;
    r.disagreement = disagreement(state);
    r.consensus_error = consensus_error(state);
    r.objective = obj;
    if (opts.reference) r.lyapunov_distance = lyapunov_distance(state, *opts.reference);
    r.ergodic_bound_lhs = state.k >= 1 ? ergodic_lhs(state.locals, means) : 0.0;
    if (opts.trace_elements) {
        const Mat& x0 = state.agents.front().X;
        r.trace.assign(x0.data().begin(), x0.data().begin() + x0.cols());
    }
    return r;
}

double residual_max_now(const DTLEProblem& problem, const SolverState& state) {
    double rmax = 0.0;
    for (const auto& a : state.agents) rmax = std::max(rmax, residual(problem, a.X));
    return rmax;
}

}  // namespace

Trajectory run(const DTLEProblem& problem, const std::vector<LocalData>& locals,
               const TopologySchedule& schedule, const RunOptions& opts) {
    if (opts.tol < 0.0) throw ParameterError("run: tol must be >= 0");
    if (opts.max_iters < 0) throw ParameterError("run: max_iters must be >= 0");
    const std::size_t m = locals.size();
    const std::size_t n = problem.n;

    SolverState state = init_state(locals, opts.init, opts.init_scale, opts.init_seed);
    std::vector<AgentEstimate> sums(m, AgentEstimate{Mat(n, n), Mat(n, n)});
    std::vector<AgentEstimate> means = sums;

    Trajectory traj;
    traj.records.push_back(make_record(problem, state, means, opts));
    traj.stop = StopReason::MaxIters;

    long k = 0;
    while (k < opts.max_iters) {
        if (residual_max_now(problem, state) <= opts.tol) {
            traj.stop = StopReason::Tolerance;
            break;
        }
        state = step(state, schedule.graph_at(k), opts.threads);
        ++k;
        for (std::size_t i = 0; i < m; ++i) {
            if (!state.agents[i].X.all_finite() || !state.agents[i].Y.all_finite())
                throw DivergenceError(k, "non-finite estimate at round " + std::to_string(k) +
                                             " (agent " + std::to_string(i + 1) +
                                             "); step sizes likely violate the admissible range");
            sums[i].X += state.agents[i].X;
            sums[i].Y += state.agents[i].Y;
            means[i].X = sums[i].X * (1.0 / static_cast<double>(k));
            means[i].Y = sums[i].Y * (1.0 / static_cast<double>(k));
        }
        if (k % opts.stride == 0)
            traj.records.push_back(make_record(problem, state, means, opts));
    }
    if (traj.stop != StopReason::Tolerance &&
        residual_max_now(problem, state) <= opts.tol)
        traj.stop = StopReason::Tolerance;
    if (traj.records.back().k != state.k)
        traj.records.push_back(make_record(problem, state, means, opts));
    traj.final_state = std::move(state);
    traj.running_means = std::move(means);
    traj.rounds = k;
    return traj;
}

RateEstimate estimate_linear_rate(const Trajectory& traj, std::pair<long, long> window,
                                  double floor) {
    std::vector<double> xs, ys;
    for (const auto& rec : traj.records) {
        if (rec.k < window.first || rec.k > window.second) continue;
        if (rec.residual_max <= 10.0 * floor) continue;
        xs.push_back(static_cast<double>(rec.k));
        ys.push_back(std::log(rec.residual_max));
    }
    if (xs.size() < 10)
        throw RateEstimationError("estimate_linear_rate: fewer than 10 usable records");
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    RateEstimate est;
    est.slope = sxy / sxx;
    est.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    est.k_start = static_cast<long>(xs.front());
    est.k_end = static_cast<long>(xs.back());
    return est;
}

Mat transition_matrix(const std::vector<MixingMatrix>& ws, std::size_t s, std::size_t k) {
    if (s > k || k >= ws.size()) throw ParameterError("transition_matrix: index out of range");
    Mat phi = ws[s].W;
    for (std::size_t r = s + 1; r <= k; ++r) phi = phi * ws[r].W;
    return phi;
}

double phi_bound(double eta, std::size_t B, std::size_t m, double gap) {
    if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("phi_bound: eta must be in (0,1)");
    if (B < 1 || m < 2 || gap < 0.0) throw ParameterError("phi_bound: bad arguments");
    const double b0 = static_cast<double>((m - 1) * B);
    const double q = 1.0 - std::pow(eta, b0);
    return 2.0 * (1.0 + std::pow(eta, -b0)) / q * std::pow(q, gap / b0);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "k,residual_mean,residual_max,disagreement,consensus_error,objective,"
          "lyapunov_distance,ergodic_bound_lhs";
    const std::size_t trace_len = traj.records.empty() ? 0 : traj.records.front().trace.size();
    for (std::size_t j = 0; j < trace_len; ++j) os << ",x1_" << (j + 1);
    os << '\n';
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << buf;
    };
    for (const auto& r : traj.records) {
        os << r.k << ',';
        put(r.residual_mean);
        os << ',';
        put(r.residual_max);
        os << ',';
        put(r.disagreement);
        os << ',';
        put(r.consensus_error);
        os << ',';
        put(r.objective);
        os << ',';
        if (r.lyapunov_distance) put(*r.lyapunov_distance);
        os << ',';
        put(r.ergodic_bound_lhs);
        for (double v : r.trace) {
            os << ',';
            put(v);
        }
        os << '\n';
    }
}

}  // namespace dtle
