#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dtle/fixtures.hpp"
#include "dtle/oracle.hpp"
#include "dtle/problem.hpp"
#include "dtle/rng.hpp"

using namespace dtle;

namespace {

Mat random_mat(std::size_t r, std::size_t c, CounterRng& rng, double lo = -1.0, double hi = 1.0) {
    Mat m(r, c);
    for (double& v : m.data()) v = rng.uniform(lo, hi);
    return m;
}

// Central finite differences of local_objective, the independent gradient oracle.
std::pair<Mat, Mat> fd_gradients(const LocalData& d, const AgentEstimate& e, double h) {
    const std::size_t n = e.X.rows();
    Mat gx(n, n), gy(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            AgentEstimate p = e, q = e;
            p.X(i, j) += h;
            q.X(i, j) -= h;
            gx(i, j) = (local_objective(d, p) - local_objective(d, q)) / (2 * h);
            p = e;
            q = e;
            p.Y(i, j) += h;
            q.Y(i, j) -= h;
            gy(i, j) = (local_objective(d, p) - local_objective(d, q)) / (2 * h);
        }
    return {gx, gy};
}

}  // namespace

TEST_CASE("DTLEProblem validates Q symmetry") {
    CHECK_THROWS_AS(DTLEProblem(Mat::identity(2), Mat(2, 2, {0, 1, 0, 0})), NotSymmetricError);
    CHECK_THROWS_AS(DTLEProblem(Mat(2, 3), Mat(2, 3)), DimensionError);
}

TEST_CASE("decompose: degenerate m=1 returns the whole problem") {
    CounterRng rng(3);
    Mat a = random_mat(4, 4, rng);
    Mat q = random_mat(4, 4, rng);
    q = (q + q.transpose()) * 0.5;
    DTLEProblem p(a, q);
    auto locals = decompose(p, 1);
    REQUIRE(locals.size() == 1);
    CHECK(frobenius_norm(locals[0].A_ri - p.A) == 0.0);
    CHECK(frobenius_norm(locals[0].Q_li - p.Q) == 0.0);
    CHECK(frobenius_norm(locals[0].E_li - Mat::identity(4)) == 0.0);
}

TEST_CASE("decompose: default sizes slice rows in order") {
    CounterRng rng(5);
    Mat a = random_mat(4, 4, rng);
    DTLEProblem p(a, Mat::identity(4));
    auto locals = decompose(p, 2);
    REQUIRE(locals.size() == 2);
    CHECK(locals[0].block == 2);
    CHECK(locals[1].block == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(locals[0].A_ri(i, j) == a(i, j));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(locals[1].A_ri(i, j) == a(2 + i, j));
}

TEST_CASE("decompose: restacking reproduces A, Q, E_n bitwise") {
    CounterRng rng(9);
    Mat a = random_mat(6, 6, rng);
    Mat q = random_mat(6, 6, rng);
    q = (q + q.transpose()) * 0.5;
    DTLEProblem p(a, q);
    for (std::size_t m : {1u, 2u, 3u, 6u}) {
        auto locals = decompose(p, m);
        Mat ra(6, 6), rq(6, 6), re(6, 6);
        for (const auto& d : locals) {
            for (std::size_t i = 0; i < d.block; ++i)
                for (std::size_t j = 0; j < 6; ++j) ra(d.offset + i, j) = d.A_ri(i, j);
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < d.block; ++j) {
                    rq(i, d.offset + j) = d.Q_li(i, j);
                    re(i, d.offset + j) = d.E_li(i, j);
                }
        }
        CHECK(ra.data() == a.data());
        CHECK(rq.data() == q.data());
        CHECK(re.data() == Mat::identity(6).data());
    }
}

TEST_CASE("decompose errors") {
    DTLEProblem p(Mat::identity(3), Mat::identity(3));
    CHECK_THROWS_AS(decompose(p, 4), PartitionError);
    CHECK_THROWS_AS(decompose(p, 2, std::vector<std::size_t>{1, 1}), PartitionError);
    CHECK_THROWS_AS(decompose(p, 2, std::vector<std::size_t>{1, 1, 1}), PartitionError);
}

TEST_CASE("local objective: scalar hand value and zero-estimate case") {
    DTLEProblem p(Mat(1, 1, {0.5}), Mat(1, 1, {0.75}));
    auto locals = decompose(p, 1);
    const AgentEstimate zero{Mat(1, 1), Mat(1, 1)};
    CHECK(local_objective(locals[0], zero) == doctest::Approx(0.28125).epsilon(1e-15));

    // X=0, Y=0 in general: f_i = 1/2 ||Q_li||_F^2
    CounterRng rng(13);
    Mat a = random_mat(4, 4, rng);
    Mat q = random_mat(4, 4, rng);
    q = (q + q.transpose()) * 0.5;
    DTLEProblem gp(a, q);
    const AgentEstimate z4{Mat(4, 4), Mat(4, 4)};
    for (const auto& d : decompose(gp, 2)) {
        const double nq = frobenius_norm(d.Q_li);
        CHECK(local_objective(d, z4) == doctest::Approx(0.5 * nq * nq).epsilon(1e-14));
    }
}

TEST_CASE("objective vanishes at a solution pair") {
    DTLEProblem p = generate_random_problem(4, 0.5, 77);
    const CentralizedSolution sol = solve_centralized(p);
    const AgentEstimate star{sol.X_star, p.A * sol.X_star};
    for (const auto& d : decompose(p, 2)) {
        CHECK(local_objective(d, star) <= 1e-20);
        auto [gx, gy] = local_gradients(d, star);
        CHECK(frobenius_norm(gx) <= 1e-10);
        CHECK(frobenius_norm(gy) <= 1e-10);
    }
}

TEST_CASE("scalar gradients by hand") {
    DTLEProblem p(Mat(1, 1, {0.5}), Mat(1, 1, {0.75}));
    auto locals = decompose(p, 1);
    auto [gx, gy] = local_gradients(locals[0], AgentEstimate{Mat(1, 1), Mat(1, 1)});
    CHECK(gx(0, 0) == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(gy(0, 0) == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("gradients match finite differences on 50 random instances") {
    CounterRng rng(101);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng.below(4);  // n in 2..5
        const std::size_t m = 1 + rng.below(std::min<std::size_t>(3, n));
        Mat a = random_mat(n, n, rng);
        Mat q = random_mat(n, n, rng);
        q = (q + q.transpose()) * 0.5;
        DTLEProblem p(a, q);
        auto locals = decompose(p, m);
        AgentEstimate e{random_mat(n, n, rng), random_mat(n, n, rng)};
        for (const auto& d : locals) {
            auto [gx, gy] = local_gradients(d, e);
            auto [fx, fy] = fd_gradients(d, e, 1e-6);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    CHECK(std::abs(gx(i, j) - fx(i, j)) <= 1e-4);
                    CHECK(std::abs(gy(i, j) - fy(i, j)) <= 1e-4);
                }
        }
    }
}

TEST_CASE("xi_bound hand values") {
    DTLEProblem p(Mat(1, 1, {0.5}), Mat(1, 1, {0.75}));
    auto locals = decompose(p, 1);
    CHECK(locals[0].xi == doctest::Approx(2.5).epsilon(1e-15));

    // zero A row block, n_i = 1: xi = 2 ||E_li||_F^2 = 2
    DTLEProblem pz(Mat(2, 2), Mat::identity(2));
    auto lz = decompose(pz, 2);
    CHECK(lz[0].xi == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("xi satisfies the step-size inequality on random probes") {
    CounterRng rng(211);
    Mat a_ri = random_mat(2, 4, rng);
    LocalData d;
    d.agent_id = 0;
    d.offset = 0;
    d.block = 2;
    d.A_ri = a_ri;
    d.E_li = Mat::identity(4).col_block(0, 2);
    d.Q_li = Mat(4, 2);
    d.xi = xi_bound(d);
    for (int t = 0; t < 200; ++t) {
        Mat t1 = random_mat(2, 4, rng);
        Mat t2 = random_mat(4, 2, rng);
        const double lhs1 = frobenius_norm((d.A_ri.transpose() * t1) * -1.0 - t2 * d.E_li.transpose());
        const double lhs2 = frobenius_norm(d.E_li * t1 + t2 * d.A_ri);
        const double n1 = frobenius_norm(t1);
        const double n2 = frobenius_norm(t2);
        CHECK(lhs1 * lhs1 + lhs2 * lhs2 <= d.xi * (n1 * n1 + n2 * n2) * (1 + 1e-12));
    }
}

TEST_CASE("default_step stays in the admissible interval") {
    LocalData d;
    d.xi = 2.5;
    CHECK(default_step(d, 0.5) == doctest::Approx(0.2).epsilon(1e-15));
    d.xi = 0.5;
    CHECK(default_step(d, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    d.xi = 4.0;
    CHECK(default_step(d, 0.999) == doctest::Approx(0.24975).epsilon(1e-12));
    CHECK(default_step(d, 0.999) < 0.25);
    CHECK_THROWS_AS(default_step(d, 1.0), ParameterError);
    CHECK_THROWS_AS(default_step(d, 0.0), ParameterError);
}
