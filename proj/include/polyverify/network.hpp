#pragma once

#include "polyverify/geometry.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace polyverify {

struct Layer {
    Matrix W;
    Vector b;
    bool nonlinear = false;

    std::size_t inputs() const { return static_cast<std::size_t>(W.cols()); }
    std::size_t outputs() const { return static_cast<std::size_t>(W.rows()); }
    Vector apply(const Vector& z) const;
};

/// Feed-forward ReLU network. Layers must compose and the last one is linear.
class ReluNetwork {
public:
    explicit ReluNetwork(std::vector<Layer> layers);

    const std::vector<Layer>& layers() const { return layers_; }
    std::size_t depth() const { return layers_.size(); }
    std::size_t input_dim() const { return layers_.front().inputs(); }
    std::size_t output_dim() const { return layers_.back().outputs(); }
    /// (inputs, outputs) of each layer.
    std::vector<std::pair<std::size_t, std::size_t>> arch() const;

    /// One nonlinear layer followed by one linear layer.
    bool is_shallow() const;

    Vector eval(const Vector& x) const;

private:
    std::vector<Layer> layers_;
};

inline Vector eval(const ReluNetwork& net, const Vector& x) { return net.eval(x); }

/// outer ∘ inner: evaluates inner first. The layer list is inner's layers followed by outer's.
ReluNetwork sequential_compose(const ReluNetwork& outer, const ReluNetwork& inner);

/// Shared-input parallel composition: first layers stacked, later layers block-diagonal.
/// Both networks need the same depth and matching layer kinds.
ReluNetwork parallel_compose(const ReluNetwork& a, const ReluNetwork& b);

/// Disjoint-input parallel composition: every layer block-diagonal, so the
/// result reads a's inputs followed by b's inputs.
ReluNetwork stack_disjoint(const ReluNetwork& a, const ReluNetwork& b);

/// Single linear layer copying n inputs to m > n outputs, repeating the last input.
ReluNetwork input_replicator(std::size_t n, std::size_t m);

ReluNetwork two_element_min();
ReluNetwork two_element_max();

/// ceil(n/2) two-element min (max) networks over consecutive input pairs,
/// preceded by an input replicator when n is odd.
ReluNetwork pairwise_min(std::size_t n);
ReluNetwork pairwise_max(std::size_t n);

/// Divide-and-conquer cascade of pairwise stages down to one output. k >= 2.
ReluNetwork build_min_network(std::size_t k);
ReluNetwork build_max_network(std::size_t k);

/// One scalar output of a TLL network: N local linear functions (rows of W, b)
/// and M selector sets of 0-based local-function indices.
struct TllComponent {
    Matrix W;
    Vector b;
    std::vector<std::vector<std::size_t>> selectors;
};

/// Two-Level-Lattice network: output κ is max_j min_{k ∈ s_j} [W^κ x + b^κ]_k.
class TllNetwork {
public:
    explicit TllNetwork(std::vector<TllComponent> components,
                        const Tolerances& tol = default_tolerances());

    std::size_t input_dim() const { return n_; }
    std::size_t output_dim() const { return components_.size(); }
    std::size_t local_count() const { return N_; }
    std::size_t term_count() const { return M_; }
    const std::vector<TllComponent>& components() const { return components_; }

private:
    std::size_t n_ = 0;
    std::size_t N_ = 0;
    std::size_t M_ = 0;
    std::vector<TllComponent> components_;
};

/// Evaluates the lattice expression directly on real numbers.
Vector tll_eval_lattice(const TllNetwork& t, const Vector& x);

/// The ReLU realization max_M ∘ (∥_j min_N ∘ S_j) ∘ local-layer, per component,
/// with components composed in parallel.
ReluNetwork tll_to_relu(const TllNetwork& t);

}  // namespace polyverify
