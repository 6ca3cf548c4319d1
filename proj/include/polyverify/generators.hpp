#pragma once

// Seeded random instances used by the bench subcommand and the test suites.

#include "polyverify/network.hpp"
#include "polyverify/verifier.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace polyverify {

using Rng = std::mt19937_64;

/// Gaussian normals and offsets; `central` forces every offset to zero.
std::vector<LinearFunctional> random_functionals(std::size_t count, std::size_t dim, Rng& rng,
                                                 bool central = false);

/// Axis-aligned box [lo, hi]^dim as 2·dim constraints.
Polytope box(std::size_t dim, double lo, double hi);
Polytope box(const Vector& lo, const Vector& hi);

ReluNetwork random_shallow_network(std::size_t inputs, std::size_t neurons, std::size_t outputs, Rng& rng);
/// Nonlinear hidden layers of the given widths, then a linear output layer.
ReluNetwork random_relu_network(std::size_t inputs, const std::vector<std::size_t>& hidden,
                                std::size_t outputs, Rng& rng);
/// Random TLL with N local functions and M nonempty random selector sets per component.
TllNetwork random_tll(std::size_t inputs, std::size_t outputs, std::size_t locals, std::size_t terms, Rng& rng);

/// P_x = [-1,1]^n and a P_y box around the sampled output range, grown or shrunk
/// at random so both verdicts occur.
VerificationProblem random_problem(Network net, Rng& rng);

}  // namespace polyverify
