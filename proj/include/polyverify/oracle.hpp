#pragma once

// Brute-force references for cross-checking the traversal and the verifier.
// None of this goes through traverse_regions or the activation recovery.

#include "polyverify/arrangement.hpp"
#include "polyverify/verifier.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>

namespace polyverify {

inline constexpr std::size_t kBruteForceMaxHyperplanes = 20;
inline constexpr std::uint64_t kDefaultOracleSeed = 0xC0FFEE;

struct OracleReport {
    bool agreed = true;
    std::string details;  // empty iff agreed
};

/// Every sign vector whose closed region has an interior point. 2^N LPs; N <= 20.
std::set<RegionEncoding> brute_force_regions(const Arrangement& a,
                                             const Tolerances& tol = default_tolerances());

/// Hit-and-run sampling over P_x; returns the first point whose image violates
/// some output constraint by more than tol.feasibility.
std::optional<Violation> sample_falsify(const VerificationProblem& p, std::size_t trials,
                                        std::uint64_t seed = kDefaultOracleSeed,
                                        const Tolerances& tol = default_tolerances());

/// Hit-and-run sampler over a bounded full-dimensional polytope.
std::vector<Vector> hit_and_run(const Polytope& p, std::size_t samples, std::uint64_t seed,
                                const Tolerances& tol = default_tolerances());

/// Reference verifier: brute-force regions, affine pieces recovered by
/// evaluating the network around each region witness.
Verdict exhaustive_verify(const VerificationProblem& p, const Tolerances& tol = default_tolerances());

/// Compare traverse_regions against brute_force_regions.
OracleReport check_enumeration(const Arrangement& a, const Tolerances& tol = default_tolerances());

/// Compare verify against exhaustive_verify and sample_falsify.
OracleReport check_verdict(const VerificationProblem& p, const Verdict& verdict,
                           std::size_t trials = 10000, std::uint64_t seed = kDefaultOracleSeed,
                           const Tolerances& tol = default_tolerances());

}  // namespace polyverify
