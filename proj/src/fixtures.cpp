#include "dtle/fixtures.hpp"

#include <cmath>
#include <cstdlib>

#include "dtle/rng.hpp"

namespace dtle {

namespace {

DTLEProblem table1() {
    // 10x10 system matrix of the controllability test instance.
    const std::vector<double> a = {
        0.0061, 0.1355, 0.0998, 0.1051, 0.1085, 0.0007, 0.1095, 0.0817, 0.0036, 0.0625,
        0.1492, 0.1171, 0.0385, 0.0708, 0.0791, 0.0387, 0.0523, 0.0311, 0.0163, 0.1427,
        0.1014, 0.1360, 0.0263, 0.0603, 0.0087, 0.0481, 0.0586, 0.0165, 0.1036, 0.0670,
        0.1255, 0.0109, 0.0290, 0.1362, 0.1128, 0.0086, 0.0244, 0.1072, 0.1397, 0.0689,
        0.1439, 0.1434, 0.0378, 0.0980, 0.0884, 0.0410, 0.1360, 0.1231, 0.1216, 0.0058,
        0.0268, 0.1180, 0.1009, 0.0915, 0.0303, 0.1404, 0.0200, 0.1167, 0.0305, 0.1475,
        0.0944, 0.1159, 0.0598, 0.1209, 0.1100, 0.0749, 0.0108, 0.1298, 0.0572, 0.0684,
        0.1189, 0.0558, 0.0391, 0.1120, 0.0946, 0.0952, 0.1077, 0.0560, 0.0840, 0.0900,
        0.0958, 0.0067, 0.0693, 0.0899, 0.1106, 0.0007, 0.0687, 0.0153, 0.0499, 0.0388,
        0.0828, 0.0712, 0.0463, 0.1241, 0.0535, 0.1397, 0.0728, 0.1038, 0.1492, 0.0129};
    const std::vector<double> b = {
        1, 1,
        1, 0,
        0, 0,
        0, 1,
        1, 0,
        0, 0,
        1, 0,
        1, 1,
        0, 1,
        0, 0};
    Mat A(10, 10, a);
    Mat B(10, 2, b);
    Mat Q = B * B.transpose();
    return DTLEProblem(std::move(A), std::move(Q));
}

DTLEProblem scalar_fixture() {
    return DTLEProblem(Mat(1, 1, {0.5}), Mat(1, 1, {0.75}));
}

}  // namespace

DTLEProblem load_fixture(const std::string& name) {
    if (name == "table1") return table1();
    if (name == "scalar") return scalar_fixture();
    if (name.rfind("random-n", 0) == 0) {
        const std::string tail = name.substr(8);
        char* end = nullptr;
        const long n = std::strtol(tail.c_str(), &end, 10);
        if (!end || *end != '\0' || n < 1)
            throw FixtureError("bad random fixture '" + name + "'; use e.g. random-n8");
        return generate_random_problem(static_cast<std::size_t>(n), 0.5, 12345);
    }
    std::string available;
    for (const auto& f : fixture_names()) available += (available.empty() ? "" : ", ") + f;
    throw FixtureError("unknown fixture '" + name + "'; available: " + available);
}

std::vector<std::string> fixture_names() {
    return {"table1", "scalar", "random-nXX (e.g. random-n8)"};
}

DTLEProblem generate_random_problem(std::size_t n, double rho, std::uint64_t seed) {
    if (!(rho > 0.0 && rho < 1.0))
        throw ParameterError("generate_random_problem: need 0 < rho < 1");
    CounterRng rng(seed, /*stream=*/6);
    Mat A(n, n);
    for (double& v : A.data()) v = rng.next_unit();

    // Power iteration. Nonnegative A has a real dominant (Perron) eigenvalue,
    // so the ratio converges.
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0;
    double est = 1.0;
    for (int it = 0; it < 200; ++it) {
        Vec w = matvec(A, v);
        est = w.norm();
        if (est == 0.0) break;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / est;
    }
    if (est > 0.0) A *= rho / est;

    const std::size_t cols = (n + 3) / 4;
    Mat B(n, cols);
    for (double& x : B.data()) x = rng.next_unit();
    Mat Q = B * B.transpose();
    return DTLEProblem(std::move(A), std::move(Q));
}

}  // namespace dtle
