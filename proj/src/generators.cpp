#include "polyverify/generators.hpp"

#include "polyverify/oracle.hpp"

#include <algorithm>
#include <limits>

namespace polyverify {

namespace {

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g(rng);
    }
    return m;
}

}  // namespace

std::vector<LinearFunctional> random_functionals(std::size_t count, std::size_t dim, Rng& rng,
                                                 bool central) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<LinearFunctional> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vector w = gaussian(static_cast<Eigen::Index>(dim), 1, rng);
        const double c = central ? 0.0 : g(rng);
        out.emplace_back(std::move(w), c);
    }
    return out;
}

Polytope box(const Vector& lo, const Vector& hi) {
    const auto n = lo.size();
    std::vector<LinearFunctional> cs;
    for (Eigen::Index k = 0; k < n; ++k) {
        cs.emplace_back(Vector::Unit(n, k), -hi(k));
        cs.emplace_back(-Vector::Unit(n, k), lo(k));
    }
    return Polytope(static_cast<std::size_t>(n), cs);
}

Polytope box(std::size_t dim, double lo, double hi) {
    const auto n = static_cast<Eigen::Index>(dim);
    return box(Vector::Constant(n, lo), Vector::Constant(n, hi));
}

ReluNetwork random_relu_network(std::size_t inputs, const std::vector<std::size_t>& hidden,
                                std::size_t outputs, Rng& rng) {
    std::vector<Layer> layers;
    std::size_t width = inputs;
    for (auto h : hidden) {
        const auto rows = static_cast<Eigen::Index>(h);
        layers.push_back({gaussian(rows, static_cast<Eigen::Index>(width), rng),
                          gaussian(rows, 1, rng).col(0), true});
        width = h;
    }
    const auto rows = static_cast<Eigen::Index>(outputs);
    layers.push_back({gaussian(rows, static_cast<Eigen::Index>(width), rng),
                      gaussian(rows, 1, rng).col(0), false});
    return ReluNetwork(std::move(layers));
}

ReluNetwork random_shallow_network(std::size_t inputs, std::size_t neurons, std::size_t outputs, Rng& rng) {
    return random_relu_network(inputs, {neurons}, outputs, rng);
}

TllNetwork random_tll(std::size_t inputs, std::size_t outputs, std::size_t locals, std::size_t terms,
                      Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<std::size_t> pick(0, locals - 1);
    std::vector<TllComponent> comps;
    for (std::size_t k = 0; k < outputs; ++k) {
        TllComponent c;
        c.W = gaussian(static_cast<Eigen::Index>(locals), static_cast<Eigen::Index>(inputs), rng);
        c.b = gaussian(static_cast<Eigen::Index>(locals), 1, rng).col(0);
        for (std::size_t j = 0; j < terms; ++j) {
            std::vector<std::size_t> s;
            for (std::size_t i = 0; i < locals; ++i) {
                if (coin(rng)) s.push_back(i);
            }
            if (s.empty()) s.push_back(pick(rng));
            c.selectors.push_back(std::move(s));
        }
        comps.push_back(std::move(c));
    }
    return TllNetwork(std::move(comps));
}

VerificationProblem random_problem(Network net, Rng& rng) {
    const std::size_t n = input_dim(net);
    const std::size_t m = output_dim(net);
    Polytope px = box(n, -1.0, 1.0);
    const auto samples = hit_and_run(px, 200, rng());
    Vector lo = Vector::Constant(static_cast<Eigen::Index>(m), std::numeric_limits<double>::infinity());
    Vector hi = -lo;
    for (const auto& x : samples) {
        const Vector y = eval(net, x);
        lo = lo.cwiseMin(y);
        hi = hi.cwiseMax(y);
    }
    std::uniform_real_distribution<double> grow(-0.3, 0.5);
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        const double span = std::max(hi(k) - lo(k), 1e-3);
        lo(k) -= grow(rng) * span;
        hi(k) += grow(rng) * span;
        if (hi(k) - lo(k) < 1e-3) hi(k) = lo(k) + 1e-3;
    }
    return VerificationProblem{std::move(net), std::move(px), box(lo, hi)};
}

}  // namespace polyverify
