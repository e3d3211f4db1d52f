#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dtle/matcore.hpp"

namespace dtle {

/// The global instance AXA' - X + Q = 0. Held only by the harness and the
/// centralized oracle; agents see their LocalData slice.
struct DTLEProblem {
    Mat A;
    Mat Q;
    std::size_t n = 0;

    DTLEProblem() = default;
    DTLEProblem(Mat a, Mat q);  // validates shapes and Q symmetry
};

struct Partition {
    std::size_t m = 0;
    std::vector<std::size_t> sizes;    // n_1..n_m, each >= 1, summing to n
    std::vector<std::size_t> offsets;  // cumulative starts

    static Partition balanced(std::size_t n, std::size_t m);
    static Partition from_sizes(std::size_t n, std::vector<std::size_t> sizes);
};

/// Agent i's private slice of the problem.
struct LocalData {
    std::size_t agent_id = 0;  // 0-based internally
    std::size_t offset = 0;    // first row/column of this agent's block
    std::size_t block = 0;     // n_i
    Mat A_ri;                  // n_i x n
    Mat Q_li;                  // n x n_i
    Mat E_li;                  // n x n_i, columns of the identity
    double xi = 0.0;
    double alpha = 0.0;
};

struct AgentEstimate {
    Mat X;
    Mat Y;
};

// Curvature-style bound: xi = 2(||A_ri||_F^2 + ||E_li||_F^2). Valid for the
// step-size inequality because the Frobenius norm dominates the spectral one.
double xi_bound(const LocalData& d);

// alpha = safety * min{1, 1/xi}, strictly inside the admissible interval.
// safety must lie in (0,1).
double default_step(const LocalData& d, double safety);

// Row/column block decomposition. Stacking all A_ri vertically reproduces A;
// stacking all Q_li (and E_li) horizontally reproduces Q (and the identity).
// Each record carries xi = xi_bound and alpha = default_step(safety).
std::vector<LocalData> decompose(const DTLEProblem& p, std::size_t m,
                                 const std::optional<std::vector<std::size_t>>& sizes = std::nullopt,
                                 double safety = 0.5);

// f_i = 1/2 ||Y^{ri} - A_ri X||_F^2 + 1/2 ||Y A_ri' - X E_li + Q_li||_F^2
double local_objective(const LocalData& d, const AgentEstimate& e);

// Exact partial gradients of local_objective w.r.t. X and Y:
//   d_X = -A_ri'(Y^{ri} - A_ri X) - (Y A_ri' - X E_li + Q_li) E_li'
//   d_Y =  E_li (Y^{ri} - A_ri X) + (Y A_ri' - X E_li + Q_li) A_ri
std::pair<Mat, Mat> local_gradients(const LocalData& d, const AgentEstimate& e);

}  // namespace dtle
