#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dtle/matcore.hpp"

namespace dtle {

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;  // (i,j) with i<j, 0-based

/// Undirected weighted graph for one communication round. The adjacency is
/// doubly stochastic (Metropolis weights with a self-weight remainder on the
/// diagonal); the Laplacian keeps row sums zero and lambda_max <= 2.
struct Graph {
    std::size_t m = 0;
    EdgeSet edges;
    Mat adjacency;  // m x m
    Mat laplacian;  // m x m
};

struct MixingMatrix {
    Mat W;             // m x m, rows sum to 1
    double eta = 0.0;  // min positive entry
};

struct LaplacianReport {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double fiedler = 0.0;  // second-smallest eigenvalue
    double max_row_sum_abs = 0.0;
    bool connected = false;
};

struct ScheduleReport {
    bool pass = false;
    long first_violation = -1;  // window start round, when pass is false
    double eta = 0.0;           // min positive mixing entry over the horizon (when alphas given)
    std::string detail;
};

enum class ScheduleFamily { FiniteConnected, UniformlyConnected };

/// A rule mapping round k to one graph from a finite list. Pure in (seed, k).
struct TopologySchedule {
    ScheduleFamily family = ScheduleFamily::FiniteConnected;
    std::vector<Graph> graphs;
    std::size_t B = 1;
    std::uint64_t seed = 0;
    std::vector<std::size_t> cycle;  // uniformly-connected: fixed period-B group order

    std::size_t index_at(long k) const;
    const Graph& graph_at(long k) const { return graphs[index_at(k)]; }
};

// Metropolis weights: a_ij = 1/(1+max(deg_i,deg_j)) on edges, self-weight
// a_ii = 1 - sum_j a_ij. Rejects self-loops and out-of-range nodes.
Graph metropolis_adjacency(std::size_t m, const EdgeSet& edges);

LaplacianReport laplacian_check(const Graph& g);

// w_ii = 1 - (alpha_i/2) l_ii, w_ij = -(alpha_i/2) l_ij. Row sums are
// asserted to be 1 within 1e-10; doubly stochastic only for identical alphas.
MixingMatrix weight_matrix(const Graph& g, const std::vector<double>& alphas);

// Every listed graph must be connected; the rule picks uniformly at random
// (seeded, reproducible) each round.
TopologySchedule schedule_finite_connected(std::vector<Graph> graphs, std::uint64_t seed);

// Cycles the edges of a seeded random spanning tree across B rounds in a
// seeded period-B order, so every window of B consecutive rounds unions to
// the full tree.
TopologySchedule schedule_uniformly_connected(std::size_t m, std::size_t B, std::uint64_t seed);

// Checks window-union connectivity over [0, horizon] and, when alphas are
// given, that all positive mixing entries stay >= the reported eta > 0.
ScheduleReport verify_schedule(const TopologySchedule& s, long horizon,
                               const std::vector<double>& alphas = {});

// Edge-set generators for the bundled topology families.
EdgeSet edges_ring(std::size_t m);
EdgeSet edges_path(std::size_t m);
EdgeSet edges_star(std::size_t m);
EdgeSet edges_complete(std::size_t m);
EdgeSet edges_random_spanning_tree(std::size_t m, std::uint64_t seed);
// Spanning tree plus `extra` random chords.
EdgeSet edges_random_connected(std::size_t m, std::size_t extra, std::uint64_t seed);

bool edge_union_connected(std::size_t m, const std::vector<const EdgeSet*>& sets);

}  // namespace dtle
