#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtle/problem.hpp"

namespace dtle {

// Bundled instances: "table1" (the 10x10 controllability test system with
// Q = BB'), "scalar" (a=0.5, q=0.75), and "random-nXX" (seeded generator,
// e.g. "random-n8").
DTLEProblem load_fixture(const std::string& name);

std::vector<std::string> fixture_names();

// A has i.i.d. uniform(0,1) entries rescaled so a power-iteration estimate of
// the spectral radius equals rho (so kron(A,A) - E stays nonsingular);
// Q = BB' with B an n x ceil(n/4) uniform(0,1) draw.
DTLEProblem generate_random_problem(std::size_t n, double rho, std::uint64_t seed);

}  // namespace dtle
