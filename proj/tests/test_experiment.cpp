#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dtle/experiment.hpp"
#include "dtle/fixtures.hpp"

using namespace dtle;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ExperimentConfig scalar_config(const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.fixture = "scalar";
    cfg.m = 1;
    cfg.graphs.push_back(GraphSpec{"", {}, false});  // single agent, no edges
    cfg.max_iters = 3000;
    cfg.tol = 1e-10;
    cfg.stride = 10;
    cfg.out_dir = out_dir;
    return cfg;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag)
        : path(std::filesystem::temp_directory_path() / ("dtle_test_" + tag)) {
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("build_problem covers all three sources") {
    ExperimentConfig cfg;
    cfg.fixture = "table1";
    CHECK(build_problem(cfg).n == 10);

    cfg.fixture.clear();
    cfg.random = RandomProblemSpec{3, 0.5, 5};
    DTLEProblem r1 = build_problem(cfg);
    DTLEProblem r2 = generate_random_problem(3, 0.5, 5);
    CHECK(r1.A.data() == r2.A.data());

    TempDir td("files");
    std::filesystem::create_directories(td.path);
    write_matrix_file((td.path / "a.txt").string(), Mat(1, 1, {0.5}));
    write_matrix_file((td.path / "q.txt").string(), Mat(1, 1, {0.75}));
    cfg.random.reset();
    cfg.a_file = (td.path / "a.txt").string();
    cfg.q_file = (td.path / "q.txt").string();
    CHECK(build_problem(cfg).A(0, 0) == 0.5);
}

TEST_CASE("build_locals: alpha overrides and scaling") {
    ExperimentConfig cfg;
    cfg.fixture = "table1";
    cfg.m = 5;
    cfg.scale = 0.5;
    const DTLEProblem p = build_problem(cfg);
    auto scaled = build_locals(cfg, p);
    cfg.scale = 1.0;
    auto plain = build_locals(cfg, p);
    REQUIRE(scaled.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(scaled[i].alpha == doctest::Approx(0.5 * plain[i].alpha).epsilon(1e-15));

    cfg.alphas = std::vector<double>{0.1, 0.1, 0.1, 0.1, 0.1};
    auto fixed = build_locals(cfg, p);
    for (const auto& d : fixed) CHECK(d.alpha == 0.1);

    cfg.alphas = std::vector<double>{0.1};
    CHECK_THROWS_AS(build_locals(cfg, p), ConfigError);
    cfg.alphas = std::vector<double>{0.1, 0.1, 0.1, 0.1, -0.1};
    CHECK_THROWS_AS(build_locals(cfg, p), ConfigError);
}

TEST_CASE("build_schedule: named generators and both families") {
    ExperimentConfig cfg;
    cfg.fixture = "table1";
    cfg.m = 5;
    cfg.schedule_seed = 3;
    for (const char* name : {"ring", "path", "star", "complete", "random"})
        cfg.graphs.push_back(GraphSpec{name, {}, true});
    TopologySchedule fc = build_schedule(cfg, 5);
    CHECK(fc.graphs.size() == 5);
    CHECK(verify_schedule(fc, 50).pass);

    cfg.graphs[0].name = "torus";
    CHECK_THROWS_AS(build_schedule(cfg, 5), ConfigError);

    cfg.family = "uniformly-connected";
    cfg.B = 3;
    TopologySchedule uc = build_schedule(cfg, 5);
    CHECK(uc.B == 3);
    CHECK(verify_schedule(uc, 60).pass);
}

TEST_CASE("run_experiment: scalar problem converges and writes artifacts") {
    TempDir td("scalar");
    ExperimentConfig cfg = scalar_config(td.path.string());
    ExperimentResult res = run_experiment(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.summary.termination == "converged");
    CHECK(res.summary.oracle_unique);
    CHECK(res.solution_x(0, 0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(res.summary.oracle_relative_error.value() <= 1e-7);

    CHECK(std::filesystem::exists(td.path / "trajectory.csv"));
    CHECK(std::filesystem::exists(td.path / "summary.txt"));
    Mat x = read_matrix_file((td.path / "solution_X.txt").string());
    CHECK(x(0, 0) == res.solution_x(0, 0));

    // summary final metrics must equal the last CSV record
    const std::string csv = slurp(td.path / "trajectory.csv");
    std::ostringstream want;
    want << res.trajectory.records.back().residual_max;
    CHECK(res.summary.final_residual_max == res.trajectory.records.back().residual_max);
    CHECK(res.summary.final_disagreement == res.trajectory.records.back().disagreement);
    CHECK(csv.rfind("k,residual_mean,residual_max,", 0) == 0);
}

TEST_CASE("run_experiment: byte-identical artifacts on repeat runs") {
    TempDir ta("repro_a"), tb("repro_b");
    ExperimentConfig cfg = scalar_config(ta.path.string());
    cfg.fixture = "random-n4";
    cfg.m = 2;
    cfg.graphs[0] = GraphSpec{"complete", {}, true};
    cfg.init = "random";
    cfg.init_seed = 9;
    cfg.max_iters = 500;
    cfg.tol = 0.0;  // force a fixed round count
    run_experiment(cfg);
    cfg.out_dir = tb.path.string();
    run_experiment(cfg);
    CHECK(slurp(ta.path / "trajectory.csv") == slurp(tb.path / "trajectory.csv"));
    CHECK(slurp(ta.path / "summary.txt") == slurp(tb.path / "summary.txt"));
    CHECK(slurp(ta.path / "solution_X.txt") == slurp(tb.path / "solution_X.txt"));
}

TEST_CASE("run_experiment exit codes: max-iters and divergence") {
    ExperimentConfig cfg = scalar_config("");
    cfg.max_iters = 3;
    cfg.tol = 1e-14;
    ExperimentResult capped = run_experiment(cfg);
    CHECK(capped.exit_code == 2);
    CHECK(capped.summary.termination == "max_iters");
    CHECK(capped.summary.rounds == 3);

    ExperimentConfig bad = scalar_config("");
    bad.alphas = std::vector<double>{4.0};  // far above 1/xi = 0.4
    bad.max_iters = 2000;
    ExperimentResult div = run_experiment(bad);
    CHECK(div.exit_code == 3);
    CHECK(div.summary.termination == "divergence");
}

TEST_CASE("run_experiment: table1 short run reports a rate and an oracle error") {
    TempDir td("t1");
    ExperimentConfig cfg;
    cfg.fixture = "table1";
    cfg.m = 5;
    cfg.graphs.push_back(GraphSpec{"ring", {}, true});
    cfg.graphs.push_back(GraphSpec{"star", {}, true});
    cfg.graphs.push_back(GraphSpec{"complete", {}, true});
    cfg.schedule_seed = 1;
    cfg.max_iters = 1500;
    cfg.tol = 1e-8;
    cfg.out_dir = td.path.string();
    ExperimentResult res = run_experiment(cfg);
    CHECK(res.summary.oracle_unique);
    REQUIRE(res.summary.rate.has_value());
    CHECK(res.summary.rate->slope < 0.0);
    CHECK(res.summary.min_eig_consensus_x.has_value());

    std::ostringstream ss;
    write_summary(ss, res.summary);
    const std::string s = ss.str();
    CHECK(s.find("final_residual_max=") != std::string::npos);
    CHECK(s.find("rate_slope=") != std::string::npos);
    CHECK(s.find("oracle_relative_error=") != std::string::npos);
}

TEST_CASE("env_thread_cap respects DTLE_NET_THREADS") {
    setenv("DTLE_NET_THREADS", "1", 1);
    CHECK(env_thread_cap() == 1);
    setenv("DTLE_NET_THREADS", "junk", 1);
    CHECK(env_thread_cap() >= 1);
    unsetenv("DTLE_NET_THREADS");
    CHECK(env_thread_cap() >= 1);
}
