#include "polyverify/network.hpp"

#include "polyverify/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace polyverify {

Vector Layer::apply(const Vector& z) const {
    Vector out = W * z + b;
    if (nonlinear) out = out.cwiseMax(0.0);
    return out;
}

ReluNetwork::ReluNetwork(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw ArchitectureError("network needs at least one layer");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& L = layers_[i];
        if (L.W.rows() != L.b.size()) {
            throw DimensionMismatch("layer " + std::to_string(i) + ": W has " +
                                    std::to_string(L.W.rows()) + " rows, b has " +
                                    std::to_string(L.b.size()) + " entries");
        }
        if (i > 0 && L.inputs() != layers_[i - 1].outputs()) {
            throw DimensionMismatch("layer " + std::to_string(i) + " expects " +
                                    std::to_string(L.inputs()) + " inputs but layer " +
                                    std::to_string(i - 1) + " produces " +
                                    std::to_string(layers_[i - 1].outputs()));
        }
    }
    if (layers_.back().nonlinear) throw ArchitectureError("final layer must be linear");
}

std::vector<std::pair<std::size_t, std::size_t>> ReluNetwork::arch() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(layers_.size());
    for (const auto& L : layers_) out.emplace_back(L.inputs(), L.outputs());
    return out;
}

bool ReluNetwork::is_shallow() const {
    return layers_.size() == 2 && layers_[0].nonlinear && !layers_[1].nonlinear;
}

Vector ReluNetwork::eval(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != input_dim()) {
        throw DimensionMismatch("network expects " + std::to_string(input_dim()) +
                                " inputs, got " + std::to_string(x.size()));
    }
    Vector z = x;
    for (const auto& L : layers_) z = L.apply(z);
    return z;
}

ReluNetwork sequential_compose(const ReluNetwork& outer, const ReluNetwork& inner) {
    if (inner.output_dim() != outer.input_dim()) {
        throw DimensionMismatch("sequential_compose: inner produces " +
                                std::to_string(inner.output_dim()) + " outputs, outer expects " +
                                std::to_string(outer.input_dim()));
    }
    std::vector<Layer> layers = inner.layers();
    layers.insert(layers.end(), outer.layers().begin(), outer.layers().end());
    return ReluNetwork(std::move(layers));
}

namespace {

Matrix block_diagonal(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

Vector concat(const Vector& a, const Vector& b) {
    Vector out(a.size() + b.size());
    out << a, b;
    return out;
}

void require_same_shape(const ReluNetwork& a, const ReluNetwork& b, const char* what) {
    if (a.depth() != b.depth()) {
        throw ArchitectureError(std::string(what) + ": depths " + std::to_string(a.depth()) +
                                " and " + std::to_string(b.depth()) + " differ");
    }
    for (std::size_t i = 0; i < a.depth(); ++i) {
        if (a.layers()[i].nonlinear != b.layers()[i].nonlinear) {
            throw ArchitectureError(std::string(what) + ": layer " + std::to_string(i) +
                                    " kinds differ");
        }
    }
}

}  // namespace

ReluNetwork parallel_compose(const ReluNetwork& a, const ReluNetwork& b) {
    require_same_shape(a, b, "parallel_compose");
    if (a.input_dim() != b.input_dim()) {
        throw DimensionMismatch("parallel_compose: input dimensions " +
                                std::to_string(a.input_dim()) + " and " +
                                std::to_string(b.input_dim()) + " differ");
    }
    std::vector<Layer> layers;
    layers.reserve(a.depth());
    for (std::size_t i = 0; i < a.depth(); ++i) {
        const auto& la = a.layers()[i];
        const auto& lb = b.layers()[i];
        Matrix W;
        if (i == 0) {
            W.resize(la.W.rows() + lb.W.rows(), la.W.cols());
            W << la.W, lb.W;
        } else {
            W = block_diagonal(la.W, lb.W);
        }
        layers.push_back({std::move(W), concat(la.b, lb.b), la.nonlinear});
    }
    return ReluNetwork(std::move(layers));
}

ReluNetwork stack_disjoint(const ReluNetwork& a, const ReluNetwork& b) {
    require_same_shape(a, b, "stack_disjoint");
    std::vector<Layer> layers;
    layers.reserve(a.depth());
    for (std::size_t i = 0; i < a.depth(); ++i) {
        const auto& la = a.layers()[i];
        const auto& lb = b.layers()[i];
        layers.push_back({block_diagonal(la.W, lb.W), concat(la.b, lb.b), la.nonlinear});
    }
    return ReluNetwork(std::move(layers));
}

ReluNetwork input_replicator(std::size_t n, std::size_t m) {
    if (n == 0 || m <= n) {
        throw ArchitectureError("input replicator needs 0 < n < m, got n=" + std::to_string(n) +
                                ", m=" + std::to_string(m));
    }
    const auto rows = static_cast<Eigen::Index>(m);
    const auto cols = static_cast<Eigen::Index>(n);
    Matrix W = Matrix::Zero(rows, cols);
    W.topRows(cols).setIdentity();
    W.bottomRows(rows - cols).col(cols - 1).setOnes();
    return ReluNetwork({Layer{std::move(W), Vector::Zero(rows), false}});
}

ReluNetwork two_element_min() {
    Matrix hidden(4, 2);
    hidden << -1, -1,
               1,  1,
               1, -1,
              -1,  1;
    Matrix out(1, 4);
    out << -0.5, 0.5, -0.5, -0.5;
    return ReluNetwork({Layer{hidden, Vector::Zero(4), true}, Layer{out, Vector::Zero(1), false}});
}

ReluNetwork two_element_max() {
    Matrix hidden(4, 2);
    hidden <<  1,  1,
              -1, -1,
              -1,  1,
               1, -1;
    Matrix out(1, 4);
    out << 0.5, -0.5, 0.5, 0.5;
    return ReluNetwork({Layer{hidden, Vector::Zero(4), true}, Layer{out, Vector::Zero(1), false}});
}

namespace {

ReluNetwork pairwise(std::size_t n, const ReluNetwork& pair) {
    if (n < 2) throw ArchitectureError("pairwise network needs at least 2 inputs");
    const std::size_t copies = (n + 1) / 2;
    ReluNetwork stage = pair;
    for (std::size_t c = 1; c < copies; ++c) stage = stack_disjoint(stage, pair);
    if (n % 2 == 1) return sequential_compose(stage, input_replicator(n, 2 * copies));
    return stage;
}

ReluNetwork cascade(std::size_t k, const ReluNetwork& pair) {
    if (k < 2) throw ArchitectureError("min/max network needs k >= 2, got " + std::to_string(k));
    ReluNetwork net = pairwise(k, pair);
    for (std::size_t width = (k + 1) / 2; width > 1; width = (width + 1) / 2) {
        net = sequential_compose(pairwise(width, pair), net);
    }
    return net;
}

}  // namespace

ReluNetwork pairwise_min(std::size_t n) { return pairwise(n, two_element_min()); }
ReluNetwork pairwise_max(std::size_t n) { return pairwise(n, two_element_max()); }
ReluNetwork build_min_network(std::size_t k) { return cascade(k, two_element_min()); }
ReluNetwork build_max_network(std::size_t k) { return cascade(k, two_element_max()); }

TllNetwork::TllNetwork(std::vector<TllComponent> components, const Tolerances& tol)
    : components_(std::move(components)) {
    if (components_.empty()) throw ArchitectureError("TLL network needs at least one component");
    N_ = static_cast<std::size_t>(components_.front().W.rows());
    n_ = static_cast<std::size_t>(components_.front().W.cols());
    M_ = components_.front().selectors.size();
    if (N_ == 0 || n_ == 0 || M_ == 0) {
        throw ArchitectureError("TLL component needs N >= 1 local functions, n >= 1 inputs and M >= 1 selector sets");
    }
    for (std::size_t k = 0; k < components_.size(); ++k) {
        auto& comp = components_[k];
        const std::string where = "TLL component " + std::to_string(k);
        if (static_cast<std::size_t>(comp.W.rows()) != N_ ||
            static_cast<std::size_t>(comp.W.cols()) != n_ ||
            static_cast<std::size_t>(comp.b.size()) != N_) {
            throw DimensionMismatch(where + ": local layer shape differs from component 0");
        }
        if (comp.selectors.size() != M_) {
            throw DimensionMismatch(where + ": has " + std::to_string(comp.selectors.size()) +
                                    " selector sets, expected " + std::to_string(M_));
        }
        for (auto& s : comp.selectors) {
            if (s.empty()) throw ArchitectureError(where + ": empty selector set");
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            if (s.back() >= N_) {
                throw ArchitectureError(where + ": selector index " + std::to_string(s.back()) +
                                        " out of range");
            }
        }
        for (Eigen::Index i = 0; i < comp.W.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < comp.W.rows(); ++j) {
                const double dw = (comp.W.row(i) - comp.W.row(j)).cwiseAbs().maxCoeff();
                const double db = std::abs(comp.b(i) - comp.b(j));
                if (dw <= tol.zero && db <= tol.zero) {
                    throw DegenerateInput(where + ": local linear functions " + std::to_string(i) +
                                          " and " + std::to_string(j) + " coincide");
                }
            }
        }
    }
}

Vector tll_eval_lattice(const TllNetwork& t, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != t.input_dim()) {
        throw DimensionMismatch("TLL expects " + std::to_string(t.input_dim()) + " inputs, got " +
                                std::to_string(x.size()));
    }
    Vector out(static_cast<Eigen::Index>(t.output_dim()));
    for (std::size_t k = 0; k < t.output_dim(); ++k) {
        const auto& comp = t.components()[k];
        const Vector local = comp.W * x + comp.b;
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& s : comp.selectors) {
            double term = std::numeric_limits<double>::infinity();
            for (auto i : s) term = std::min(term, local(static_cast<Eigen::Index>(i)));
            best = std::max(best, term);
        }
        out(static_cast<Eigen::Index>(k)) = best;
    }
    return out;
}

namespace {

// Rows select s (ascending), then the last selected row repeats up to N rows.
Matrix selector_matrix(const std::vector<std::size_t>& s, std::size_t N) {
    const auto rows = static_cast<Eigen::Index>(N);
    Matrix S = Matrix::Zero(rows, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t pick = s[std::min(static_cast<std::size_t>(r), s.size() - 1)];
        S(r, static_cast<Eigen::Index>(pick)) = 1.0;
    }
    return S;
}

ReluNetwork scalar_tll_to_relu(const TllComponent& comp, std::size_t N, std::size_t M) {
    const ReluNetwork local({Layer{comp.W, comp.b, false}});
    std::optional<ReluNetwork> terms;
    for (const auto& s : comp.selectors) {
        ReluNetwork select({Layer{selector_matrix(s, N), Vector::Zero(static_cast<Eigen::Index>(N)), false}});
        ReluNetwork term = N >= 2 ? sequential_compose(build_min_network(N), select) : select;
        terms = terms ? parallel_compose(*terms, term) : term;
    }
    ReluNetwork net = sequential_compose(*terms, local);
    if (M >= 2) net = sequential_compose(build_max_network(M), net);
    return net;
}

}  // namespace

ReluNetwork tll_to_relu(const TllNetwork& t) {
    std::optional<ReluNetwork> net;
    for (const auto& comp : t.components()) {
        ReluNetwork c = scalar_tll_to_relu(comp, t.local_count(), t.term_count());
        net = net ? parallel_compose(*net, c) : c;
    }
    return *net;
}

}  // namespace polyverify
