#pragma once

#include <cstdint>

#include "dtle/problem.hpp"

namespace dtle {

struct CentralizedSolution {
    Mat X_star;
    double residual = 0.0;
    bool unique = false;
};

/// P_i is the 2n^2 x 2n^2 symmetric PSD matrix with
/// f_i(X*+dX, Y*+dY) = 1/2 <z, P_i z>, z = vec_row([dY; dX]).
struct QuadraticForm {
    Mat P;
};

struct QuadraticReport {
    bool pass = false;
    double max_relative_deviation = 0.0;
};

// Kronecker vectorization: solve (kron(A,A) - E) vec_row(X) = -vec_row(Q),
// symmetrize X, re-verify the residual. Throws NoUniqueSolutionError when the
// vectorized system is numerically singular, ParameterError for n > 50.
CentralizedSolution solve_centralized(const DTLEProblem& p);

// Builds P_i = C_i1' C_i1 + C_i2' C_i2 with
//   C_i1 = kron([E_ri  -A_ri], E_n)
//   C_i2 = C_i0 * Pi,  C_i0 = kron(E_n, [A_ri  -E_li'])
// where Pi permutes vec_row([Y; X]) into vec_row([Y  X]). The reference must
// satisfy Y* = A X* and the residual equation within 1e-8.
QuadraticForm build_quadratic(const LocalData& d, const Mat& x_star, const Mat& y_star);

// Seeded random displacements; compares local_objective against the quadratic
// form. Pass iff max relative deviation <= 1e-8.
QuadraticReport check_quadratic(const LocalData& d, const QuadraticForm& q, const Mat& x_star,
                                const Mat& y_star, std::size_t samples, std::uint64_t seed);

}  // namespace dtle
