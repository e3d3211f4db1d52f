#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dtle/fixtures.hpp"
#include "dtle/oracle.hpp"
#include "dtle/rng.hpp"

using namespace dtle;

TEST_CASE("solve_centralized: scalar closed form") {
    CentralizedSolution sol = solve_centralized(DTLEProblem(Mat(1, 1, {0.5}), Mat(1, 1, {0.75})));
    CHECK(sol.unique);
    CHECK(sol.X_star(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.residual <= 1e-12);
}

TEST_CASE("solve_centralized: A = 0 gives X = Q") {
    Mat q(2, 2, {2, 1, 1, 3});
    CentralizedSolution sol = solve_centralized(DTLEProblem(Mat(2, 2), q));
    CHECK(frobenius_norm(sol.X_star - q) <= 1e-14);
}

TEST_CASE("solve_centralized: a = 1 is singular") {
    CHECK_THROWS_AS(solve_centralized(DTLEProblem(Mat(1, 1, {1.0}), Mat(1, 1, {1.0}))),
                    NoUniqueSolutionError);
}

TEST_CASE("solve_centralized residual contract on random instances") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        DTLEProblem p = generate_random_problem(4 + seed % 3, 0.5, seed);
        CentralizedSolution sol = solve_centralized(p);
        CHECK(sol.unique);
        CHECK(sol.residual <= 1e-8 * (1.0 + frobenius_norm(p.Q)));
        // symmetric output
        CHECK(frobenius_norm(sol.X_star - sol.X_star.transpose()) == 0.0);
    }
}

TEST_CASE("solve_centralized size guard") {
    CHECK_THROWS_AS(solve_centralized(DTLEProblem(Mat(51, 51), Mat::identity(51) * 0.0)),
                    ParameterError);
}

TEST_CASE("quadratic form: scalar hand expansion") {
    DTLEProblem p(Mat(1, 1, {0.5}), Mat(1, 1, {0.75}));
    auto locals = decompose(p, 1);
    const Mat x_star(1, 1, {1.0});
    const Mat y_star(1, 1, {0.5});
    QuadraticForm q = build_quadratic(locals[0], x_star, y_star);
    const double a = 0.5;
    // P = [[1+a^2, -2a], [-2a, 1+a^2]] in the (y, x) displacement ordering
    CHECK(q.P(0, 0) == doctest::Approx(1 + a * a).epsilon(1e-14));
    CHECK(q.P(0, 1) == doctest::Approx(-2 * a).epsilon(1e-14));
    CHECK(q.P(1, 0) == doctest::Approx(-2 * a).epsilon(1e-14));
    CHECK(q.P(1, 1) == doctest::Approx(1 + a * a).epsilon(1e-14));

    QuadraticReport rep = check_quadratic(locals[0], q, x_star, y_star, 10, 5);
    CHECK(rep.pass);
}

TEST_CASE("quadratic form rejects a bad reference") {
    DTLEProblem p(Mat(1, 1, {0.5}), Mat(1, 1, {0.75}));
    auto locals = decompose(p, 1);
    CHECK_THROWS_AS(build_quadratic(locals[0], Mat(1, 1, {1.0}), Mat(1, 1, {0.9})),
                    ReferenceError);
}

TEST_CASE("quadratic form equals f_i on random displacements; P_i is PSD") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const std::size_t n = 2 + seed % 3;
        DTLEProblem p = generate_random_problem(n, 0.5, 100 + seed);
        const CentralizedSolution sol = solve_centralized(p);
        const Mat y_star = p.A * sol.X_star;
        const std::size_t m = 1 + seed % std::min<std::size_t>(3, n);
        for (const auto& d : decompose(p, m)) {
            QuadraticForm q = build_quadratic(d, sol.X_star, y_star);
            CHECK(frobenius_norm(q.P - q.P.transpose()) <= 1e-10 * frobenius_norm(q.P));
            const Vec ev = sym_eigenvalues(q.P);
            CHECK(ev[0] >= -1e-8);
            QuadraticReport rep = check_quadratic(d, q, sol.X_star, y_star, 100, seed);
            CHECK(rep.pass);
            CHECK(rep.max_relative_deviation <= 1e-8);
        }
    }
}

TEST_CASE("corrupted P is detected") {
    DTLEProblem p = generate_random_problem(3, 0.5, 9);
    const CentralizedSolution sol = solve_centralized(p);
    const Mat y_star = p.A * sol.X_star;
    auto locals = decompose(p, 1);
    QuadraticForm q = build_quadratic(locals[0], sol.X_star, y_star);
    q.P(0, 1) += 1.0;
    q.P(1, 0) += 1.0;
    QuadraticReport rep = check_quadratic(locals[0], q, sol.X_star, y_star, 20, 3);
    CHECK(!rep.pass);
}

TEST_CASE("global form: block-diagonal P reproduces F on random displacements") {
    DTLEProblem p = generate_random_problem(3, 0.5, 42);
    const CentralizedSolution sol = solve_centralized(p);
    const Mat y_star = p.A * sol.X_star;
    auto locals = decompose(p, 3);
    std::vector<QuadraticForm> forms;
    for (const auto& d : locals) forms.push_back(build_quadratic(d, sol.X_star, y_star));

    CounterRng rng(77);
    const std::size_t n = 3;
    for (int t = 0; t < 20; ++t) {
        double f_direct = 0.0, f_quad = 0.0;
        for (std::size_t i = 0; i < locals.size(); ++i) {
            Mat dx(n, n), dy(n, n);
            for (double& v : dx.data()) v = rng.uniform(-1, 1);
            for (double& v : dy.data()) v = rng.uniform(-1, 1);
            f_direct += local_objective(locals[i], AgentEstimate{sol.X_star + dx, y_star + dy});
            Vec z(2 * n * n);
            for (std::size_t j = 0; j < n * n; ++j) z[j] = dy.data()[j];
            for (std::size_t j = 0; j < n * n; ++j) z[n * n + j] = dx.data()[j];
            const Vec pz = matvec(forms[i].P, z);
            double quad = 0.0;
            for (std::size_t j = 0; j < z.size(); ++j) quad += z[j] * pz[j];
            f_quad += 0.5 * quad;
        }
        CHECK(std::abs(f_direct - f_quad) <= 1e-8 * std::max(1.0, std::abs(f_direct)));
    }
}
