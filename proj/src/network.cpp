#include "dtle/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dtle/rng.hpp"

namespace dtle {

namespace {

std::vector<std::size_t> degrees(std::size_t m, const EdgeSet& edges) {
    std::vector<std::size_t> deg(m, 0);
    for (const auto& [i, j] : edges) {
        ++deg[i];
        ++deg[j];
    }
    return deg;
}

bool connected_from_adjacency_list(std::size_t m, const std::vector<std::vector<std::size_t>>& adj) {
    if (m == 0) return false;
    std::vector<bool> seen(m, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == m;
}

}  // namespace

Graph metropolis_adjacency(std::size_t m, const EdgeSet& edges) {
    if (m < 1) throw GraphError("metropolis_adjacency: need m >= 1");
    for (const auto& [i, j] : edges) {
        if (i == j) throw GraphError("metropolis_adjacency: self-loop");
        if (i >= m || j >= m) throw GraphError("metropolis_adjacency: node out of range");
        if (i > j) throw GraphError("metropolis_adjacency: edges must be ordered (i<j)");
    }
    Graph g;
    g.m = m;
    g.edges = edges;
    g.adjacency = Mat(m, m);
    const auto deg = degrees(m, edges);
    for (const auto& [i, j] : edges) {
        const double w = 1.0 / (1.0 + static_cast<double>(std::max(deg[i], deg[j])));
        g.adjacency(i, j) = w;
        g.adjacency(j, i) = w;
    }
    for (std::size_t i = 0; i < m; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) off += g.adjacency(i, j);
        g.adjacency(i, i) = 1.0 - off;
    }
    g.laplacian = Mat(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            g.laplacian(i, j) = -g.adjacency(i, j);
            row += g.adjacency(i, j);
        }
        g.laplacian(i, i) = row;
    }
    return g;
}

LaplacianReport laplacian_check(const Graph& g) {
    LaplacianReport r;
    const Vec ev = sym_eigenvalues(g.laplacian);
    r.lambda_min = ev[0];
    r.lambda_max = ev[ev.size() - 1];
    r.fiedler = g.m >= 2 ? ev[1] : 0.0;
    for (std::size_t i = 0; i < g.m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < g.m; ++j) s += g.laplacian(i, j);
        r.max_row_sum_abs = std::max(r.max_row_sum_abs, std::abs(s));
    }
    r.connected = g.m >= 2 ? (r.fiedler > 1e-10) : true;
    return r;
}

MixingMatrix weight_matrix(const Graph& g, const std::vector<double>& alphas) {
    if (alphas.size() != g.m) throw DimensionError("weight_matrix: alpha count != m");
    for (double a : alphas)
        if (!(a > 0.0 && a <= 1.0))
            throw ParameterError("weight_matrix: every alpha must be in (0,1]");
    MixingMatrix w;
    w.W = Mat(g.m, g.m);
    for (std::size_t i = 0; i < g.m; ++i) {
        for (std::size_t j = 0; j < g.m; ++j) {
            if (i == j)
                w.W(i, j) = 1.0 - 0.5 * alphas[i] * g.laplacian(i, i);
            else
                w.W(i, j) = -0.5 * alphas[i] * g.laplacian(i, j);
        }
    }
    double eta = 1.0;
    for (std::size_t i = 0; i < g.m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.m; ++j) {
            row += w.W(i, j);
            if (w.W(i, j) > 0.0) eta = std::min(eta, w.W(i, j));
        }
        if (std::abs(row - 1.0) > 1e-10)
            throw Error("weight_matrix: row sum deviates from 1");
    }
    w.eta = eta;
    return w;
}

TopologySchedule schedule_finite_connected(std::vector<Graph> graphs, std::uint64_t seed) {
    if (graphs.empty()) throw ScheduleError("schedule: empty graph list");
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        if (!laplacian_check(graphs[i]).connected)
            throw ScheduleError("schedule: graph " + std::to_string(i) + " is not connected");
    }
    TopologySchedule s;
    s.family = ScheduleFamily::FiniteConnected;
    s.graphs = std::move(graphs);
    s.B = 1;
    s.seed = seed;
    return s;
}

TopologySchedule schedule_uniformly_connected(std::size_t m, std::size_t B, std::uint64_t seed) {
    if (m < 2) throw ScheduleError("schedule: need m >= 2");
    if (B < 1) throw ScheduleError("schedule: need B >= 1");
    const EdgeSet tree = edges_random_spanning_tree(m, seed);
    // Deal the m-1 tree edges round-robin into B groups; empty groups get the
    // empty graph (isolated round), still fine for the B-window union.
    std::vector<EdgeSet> groups(B);
    std::size_t idx = 0;
    for (const auto& e : tree) groups[idx++ % B].insert(e);

    TopologySchedule s;
    s.family = ScheduleFamily::UniformlyConnected;
    s.B = B;
    s.seed = seed;
    for (const auto& g : groups) s.graphs.push_back(metropolis_adjacency(m, g));

    // Seeded period-B visiting order: every B consecutive rounds still hit
    // each group exactly once, so each window union is the whole tree.
    s.cycle.resize(B);
    std::iota(s.cycle.begin(), s.cycle.end(), std::size_t{0});
    CounterRng rng(seed, /*stream=*/1);
    for (std::size_t i = B; i > 1; --i)
        std::swap(s.cycle[i - 1], s.cycle[rng.below(i)]);
    return s;
}

std::size_t TopologySchedule::index_at(long k) const {
    if (k < 0) throw ScheduleError("schedule: negative round");
    if (family == ScheduleFamily::FiniteConnected)
        return static_cast<std::size_t>(rng_at(seed, static_cast<std::uint64_t>(k)) % graphs.size());
    return cycle[static_cast<std::size_t>(k) % B];
}

ScheduleReport verify_schedule(const TopologySchedule& s, long horizon,
                               const std::vector<double>& alphas) {
    ScheduleReport r;
    if (horizon < static_cast<long>(s.B)) {
        r.detail = "horizon shorter than window";
        return r;
    }
    const std::size_t m = s.graphs.front().m;
    const long window = static_cast<long>(s.B);
    for (long k0 = 0; k0 + window <= horizon + 1; ++k0) {
        std::vector<const EdgeSet*> sets;
        for (long k = k0; k < k0 + window; ++k) sets.push_back(&s.graph_at(k).edges);
        if (!edge_union_connected(m, sets)) {
            r.first_violation = k0;
            r.detail = "window union disconnected at round " + std::to_string(k0);
            return r;
        }
    }
    if (!alphas.empty()) {
        double eta = 1.0;
        for (long k = 0; k <= horizon; ++k) {
            const MixingMatrix w = weight_matrix(s.graph_at(k), alphas);
            eta = std::min(eta, w.eta);
        }
        r.eta = eta;
        if (!(eta > 0.0)) {
            r.detail = "nonpositive mixing entry";
            return r;
        }
    }
    r.pass = true;
    return r;
}

EdgeSet edges_ring(std::size_t m) {
    if (m < 3) throw GraphError("ring needs m >= 3");
    EdgeSet e;
    for (std::size_t i = 0; i + 1 < m; ++i) e.insert({i, i + 1});
    e.insert({0, m - 1});
    return e;
}

EdgeSet edges_path(std::size_t m) {
    if (m < 2) throw GraphError("path needs m >= 2");
    EdgeSet e;
    for (std::size_t i = 0; i + 1 < m; ++i) e.insert({i, i + 1});
    return e;
}

EdgeSet edges_star(std::size_t m) {
    if (m < 2) throw GraphError("star needs m >= 2");
    EdgeSet e;
    for (std::size_t i = 1; i < m; ++i) e.insert({0, i});
    return e;
}

EdgeSet edges_complete(std::size_t m) {
    if (m < 2) throw GraphError("complete graph needs m >= 2");
    EdgeSet e;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) e.insert({i, j});
    return e;
}

EdgeSet edges_random_spanning_tree(std::size_t m, std::uint64_t seed) {
    if (m < 2) throw GraphError("spanning tree needs m >= 2");
    // Random node order; attach each new node to a random earlier one.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng rng(seed, /*stream=*/2);
    for (std::size_t i = m; i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    EdgeSet e;
    for (std::size_t i = 1; i < m; ++i) {
        const std::size_t u = order[i];
        const std::size_t v = order[rng.below(i)];
        e.insert({std::min(u, v), std::max(u, v)});
    }
    return e;
}

EdgeSet edges_random_connected(std::size_t m, std::size_t extra, std::uint64_t seed) {
    EdgeSet e = edges_random_spanning_tree(m, seed);
    CounterRng rng(seed, /*stream=*/3);
    std::size_t added = 0, attempts = 0;
    const std::size_t max_edges = m * (m - 1) / 2;
    while (added < extra && e.size() < max_edges && attempts < 100 * (extra + 1)) {
        ++attempts;
        const std::size_t u = rng.below(m);
        const std::size_t v = rng.below(m);
        if (u == v) continue;
        const auto edge = std::make_pair(std::min(u, v), std::max(u, v));
        if (e.insert(edge).second) ++added;
    }
    return e;
}

bool edge_union_connected(std::size_t m, const std::vector<const EdgeSet*>& sets) {
    std::vector<std::vector<std::size_t>> adj(m);
    for (const EdgeSet* s : sets) {
        for (const auto& [i, j] : *s) {
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
    }
    return connected_from_adjacency_list(m, adj);
}

}  // namespace dtle
