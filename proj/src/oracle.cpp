#include "dtle/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "dtle/rng.hpp"

namespace dtle {

CentralizedSolution solve_centralized(const DTLEProblem& p) {
    const std::size_t n = p.n;
    if (n > 50) throw ParameterError("solve_centralized: dense vectorized solve limited to n <= 50");
    Mat m = kron(p.A, p.A) - Mat::identity(n * n);
    Vec rhs(n * n);
    {
        const Vec q = vec_row(p.Q);
        for (std::size_t i = 0; i < q.size(); ++i) rhs[i] = -q[i];
    }
    Vec xv;
    try {
        xv = solve_linear(m, rhs);
    } catch (const SingularMatrixError& e) {
        throw NoUniqueSolutionError(std::string("solve_centralized: vectorized system singular (") +
                                    e.what() + ")");
    }
    Mat x(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) x(i, j) = xv[i * n + j];
    // The solution of a symmetric-Q DTLE is symmetric; average out rounding.
    Mat xs = (x + x.transpose()) * 0.5;
    CentralizedSolution sol;
    sol.residual = frobenius_norm(p.A * xs * p.A.transpose() - xs + p.Q);
    sol.X_star = std::move(xs);
    sol.unique = true;
    return sol;
}

namespace {

// Permutation taking vec_row of the vertical stack [Y; X] (2n x n) to
// vec_row of the horizontal concatenation [Y  X] (n x 2n).
Mat stack_permutation(std::size_t n) {
    Mat pi(2 * n * n, 2 * n * n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            pi(p * 2 * n + q, p * n + q) = 1.0;                  // Y entries
            pi(p * 2 * n + n + q, n * n + p * n + q) = 1.0;      // X entries
        }
    return pi;
}

void check_reference(const LocalData& d, const Mat& x_star, const Mat& y_star) {
    const std::size_t n = d.A_ri.cols();
    if (x_star.rows() != n || x_star.cols() != n || y_star.rows() != n || y_star.cols() != n)
        throw DimensionError("quadratic form: reference shape mismatch");
    const AgentEstimate ref{x_star, y_star};
    const double f = local_objective(d, ref);
    // Y* = A X* and the residual equation both vanish exactly when f_i = 0.
    if (std::sqrt(2.0 * f) > 1e-8 * (1.0 + frobenius_norm(x_star)))
        throw ReferenceError("quadratic form: reference does not satisfy Y*=AX* and the equation");
}

}  // namespace

QuadraticForm build_quadratic(const LocalData& d, const Mat& x_star, const Mat& y_star) {
    check_reference(d, x_star, y_star);
    const std::size_t n = d.A_ri.cols();
    const std::size_t ni = d.block;
    const Mat e_n = Mat::identity(n);

    // [E_ri  -A_ri], ni x 2n
    Mat left(ni, 2 * n);
    for (std::size_t i = 0; i < ni; ++i) {
        left(i, d.offset + i) = 1.0;
        for (std::size_t j = 0; j < n; ++j) left(i, n + j) = -d.A_ri(i, j);
    }
    const Mat c1 = kron(left, e_n);

    // [A_ri  -E_li'], ni x 2n
    Mat right(ni, 2 * n);
    for (std::size_t i = 0; i < ni; ++i) {
        for (std::size_t j = 0; j < n; ++j) right(i, j) = d.A_ri(i, j);
        right(i, n + d.offset + i) = -1.0;
    }
    const Mat c0 = kron(e_n, right);
    const Mat c2 = c0 * stack_permutation(n);

    QuadraticForm q;
    q.P = c1.transpose() * c1 + c2.transpose() * c2;
    return q;
}

QuadraticReport check_quadratic(const LocalData& d, const QuadraticForm& q, const Mat& x_star,
                                const Mat& y_star, std::size_t samples, std::uint64_t seed) {
    if (samples < 1) throw ParameterError("check_quadratic: need samples >= 1");
    const std::size_t n = x_star.rows();
    CounterRng rng(seed, /*stream=*/5);
    QuadraticReport rep;
    for (std::size_t s = 0; s < samples; ++s) {
        Mat dx(n, n), dy(n, n);
        for (double& v : dx.data()) v = rng.uniform(-1.0, 1.0);
        for (double& v : dy.data()) v = rng.uniform(-1.0, 1.0);
        const AgentEstimate e{x_star + dx, y_star + dy};
        const double f = local_objective(d, e);

        Vec z(2 * n * n);
        for (std::size_t i = 0; i < n * n; ++i) z[i] = dy.data()[i];
        for (std::size_t i = 0; i < n * n; ++i) z[n * n + i] = dx.data()[i];
        const Vec pz = matvec(q.P, z);
        double quad = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) quad += z[i] * pz[i];
        quad *= 0.5;

        const double denom = std::max(std::abs(f), 1e-30);
        rep.max_relative_deviation =
            std::max(rep.max_relative_deviation, std::abs(f - quad) / denom);
    }
    rep.pass = rep.max_relative_deviation <= 1e-8;
    return rep;
}

}  // namespace dtle
