#pragma once

#include "polyverify/arrangement.hpp"
#include "polyverify/geometry.hpp"
#include "polyverify/network.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace polyverify {

using Network = std::variant<ReluNetwork, TllNetwork>;

std::size_t input_dim(const Network& net);
std::size_t output_dim(const Network& net);
/// Forward evaluation: layer by layer for ReLU networks, lattice form for TLLs.
Vector eval(const Network& net, const Vector& x);

/// Decide whether net(P_x) ⊆ P_y. The input polytope must be bounded and full-dimensional.
struct VerificationProblem {
    Network network;
    Polytope input;
    Polytope output;
};

/// Throws DegenerateInput / DimensionMismatch / ArchitectureError if the problem is not well posed.
void validate_problem(const VerificationProblem& p, const Tolerances& tol = default_tolerances());

enum class VerdictStatus { Sat, Unsat };

struct Violation {
    Vector witness;               // x* ∈ P_x
    std::size_t constraint = 0;   // index into the stored output constraints
    double margin = 0.0;          // ℓ_{y,i}(net(x*)) by direct evaluation
};

struct VerdictStats {
    std::size_t regions_traversed = 0;
    std::size_t regions_verified = 0;
    std::size_t lp_calls = 0;
    double wall_time_ms = 0.0;
    // LP optima in (0, ε_feas]: too small to certify a violation.
    std::size_t marginal = 0;
    // Positive LP optima whose argpoint failed direct re-evaluation.
    std::size_t unconfirmed = 0;
    std::size_t thin_regions = 0;
};

struct Verdict {
    VerdictStatus status = VerdictStatus::Sat;
    std::optional<Violation> violation;      // first (or largest, when exhaustive) violation
    std::vector<Violation> all_violations;   // filled when exhaustive
    VerdictStats stats;
    std::vector<RegionEncoding> kept_regions;  // filled when record_regions
    std::vector<Polytope> kept_closures;       // filled when record_regions
};

struct VerifyOptions {
    bool exhaustive = false;
    bool record_regions = false;
    std::size_t threads = 1;
    std::uint64_t seed = 0xC0FFEE;
    Tolerances tol{};
};

// ---- shallow networks ----

/// Row functionals of the hidden layer. Neurons whose weight row vanishes do
/// not switch and are left out.
std::vector<LinearFunctional> switching_functionals_shallow(const ReluNetwork& net,
                                                            const Tolerances& tol = default_tolerances());

/// Precomputed neuron -> hyperplane lookup for one arrangement.
class ShallowActivation {
public:
    ShallowActivation(const ReluNetwork& net, const Arrangement& a,
                      const Tolerances& tol = default_tolerances());
    /// x -> W2 D W1 x + W2 D b1 + b2 with D the neuron activity pattern on r.
    AffineFunction active_affine(const RegionEncoding& r) const;

private:
    const ReluNetwork* net_;
    // Per neuron: a hyperplane reference, or a fixed activity for constant neurons.
    std::vector<std::optional<FunctionalRef>> refs_;
    std::vector<bool> constant_active_;
};

AffineFunction active_affine_shallow(const ReluNetwork& net, const RegionEncoding& r,
                                     const Arrangement& a);

// ---- TLL networks ----

/// Pairwise differences ℓ_i − ℓ_j (i < j) of local functions, per component.
/// Pairs whose difference is constant do not switch and are left out.
std::vector<LinearFunctional> switching_functionals_tll(const TllNetwork& t,
                                                        const Tolerances& tol = default_tolerances());

class TllActivation {
public:
    TllActivation(const TllNetwork& t, const Arrangement& a,
                  const Tolerances& tol = default_tolerances());
    /// Active local function of every component on region r, stacked.
    /// Throws InvariantViolation if the pairwise signs are not a total order.
    AffineFunction active_affine(const RegionEncoding& r) const;
    /// Index of the active local function of component k on region r.
    std::size_t active_index(std::size_t k, const RegionEncoding& r) const;
    /// Local function indices of component k, sorted increasing in value on r.
    std::vector<std::size_t> order_on(std::size_t k, const RegionEncoding& r) const;

private:
    struct Pair {
        std::optional<FunctionalRef> ref;  // sign of ℓ_i − ℓ_j
        bool constant_greater = false;     // ℓ_i > ℓ_j everywhere, for constant differences
    };
    const TllNetwork* net_;
    std::vector<std::vector<Pair>> pairs_;  // per component, upper triangle row-major
};

AffineFunction active_affine_tll(const TllNetwork& t, const RegionEncoding& r, const Arrangement& a);

// ---- driver ----

/// Switching functionals of the network followed by the input constraints.
std::vector<LinearFunctional> verification_functionals(const VerificationProblem& p,
                                                       const Tolerances& tol = default_tolerances());

/// If P_y is empty, the UNSAT verdict every sound procedure must return.
std::optional<Violation> empty_output_violation(const VerificationProblem& p,
                                                const Tolerances& tol = default_tolerances());

Verdict verify(const VerificationProblem& p, const VerifyOptions& options = {});

}  // namespace polyverify
