#include "polyverify/errors.hpp"
#include "polyverify/generators.hpp"
#include "polyverify/network.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace polyverify;
using testing::mat;
using testing::vec;

namespace {

ReluNetwork linear(const Matrix& W, const Vector& b) { return ReluNetwork({Layer{W, b, false}}); }

ReluNetwork relu_identity() {
    return ReluNetwork({Layer{mat({{1}}), vec({0}), true}, Layer{mat({{1}}), vec({0}), false}});
}

TllNetwork abs_tll() {
    return TllNetwork({TllComponent{mat({{1}, {-1}}), vec({0, 0}), {{0}, {1}}}});
}

Vector gaussian_point(std::size_t n, Rng& rng, double scale = 2.0) {
    std::normal_distribution<double> g(0.0, scale);
    Vector x(static_cast<Eigen::Index>(n));
    for (auto& v : x) v = g(rng);
    return x;
}

// Lattice value computed independently of the library: max over terms of min over selected rows.
double lattice_by_hand(const TllComponent& c, const Vector& x) {
    Vector loc = c.W * x + c.b;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : c.selectors) {
        double m = std::numeric_limits<double>::infinity();
        for (auto i : s) m = std::min(m, loc(static_cast<Eigen::Index>(i)));
        best = std::max(best, m);
    }
    return best;
}

}  // namespace

TEST_CASE("evaluation") {
    CHECK(linear(Matrix::Identity(2, 2), Vector::Zero(2)).eval(vec({3, -4})) == vec({3, -4}));
    CHECK(relu_identity().eval(vec({-2}))(0) == 0.0);
    CHECK(two_element_min().eval(vec({3, 5}))(0) == 3.0);
    CHECK(two_element_max().eval(vec({3, 5}))(0) == 5.0);
    CHECK_THROWS_AS(relu_identity().eval(vec({1, 2})), DimensionMismatch);
}

TEST_CASE("construction rules") {
    CHECK_THROWS_AS(ReluNetwork({Layer{mat({{1}}), vec({0}), true}}), ArchitectureError);
    CHECK_THROWS_AS(ReluNetwork({Layer{mat({{1, 1}}), vec({0}), true}, Layer{mat({{1, 1}}), vec({0}), false}}),
                    DimensionMismatch);
    CHECK_THROWS_AS(ReluNetwork(std::vector<Layer>{}), ArchitectureError);
    CHECK(relu_identity().is_shallow());
    CHECK_FALSE(build_min_network(4).is_shallow());
    auto arch = relu_identity().arch();
    REQUIRE(arch.size() == 2);
    CHECK(arch[0] == std::make_pair<std::size_t, std::size_t>(1, 1));
}

TEST_CASE("sequential composition") {
    auto id = linear(Matrix::Identity(3, 3), Vector::Zero(3));
    Rng rng(1);
    for (int i = 0; i < 10; ++i) {
        auto x = gaussian_point(3, rng);
        CHECK(sequential_compose(id, id).eval(x) == x);
    }
    auto doubling = linear(2.0 * Matrix::Identity(2, 2), Vector::Zero(2));
    CHECK(sequential_compose(build_min_network(2), doubling).eval(vec({1, 4}))(0) == 2.0);
    CHECK_THROWS_AS(sequential_compose(build_min_network(3), doubling), DimensionMismatch);

    for (int t = 0; t < 10; ++t) {
        auto inner = random_relu_network(3, {4, 5}, 2, rng);
        auto outer = random_relu_network(2, {3}, 2, rng);
        auto last = random_shallow_network(2, 4, 1, rng);
        auto composed = sequential_compose(outer, inner);
        auto assoc_a = sequential_compose(last, composed);
        auto assoc_b = sequential_compose(sequential_compose(last, outer), inner);
        for (int k = 0; k < 5; ++k) {
            auto x = gaussian_point(3, rng);
            Vector nested = outer.eval(inner.eval(x));
            CHECK((composed.eval(x) - nested).lpNorm<Eigen::Infinity>() <= 1e-12);
            CHECK((assoc_a.eval(x) - assoc_b.eval(x)).lpNorm<Eigen::Infinity>() <= 1e-12);
        }
    }
}

TEST_CASE("parallel composition") {
    auto id = linear(mat({{1}}), vec({0}));
    CHECK(parallel_compose(id, id).eval(vec({7})) == vec({7, 7}));
    CHECK(parallel_compose(two_element_min(), two_element_max()).eval(vec({3, 5})) == vec({3, 5}));
    CHECK_THROWS_AS(parallel_compose(build_min_network(4), two_element_min()), ArchitectureError);

    Rng rng(2);
    for (int t = 0; t < 10; ++t) {
        auto a = random_relu_network(2, {3, 4}, 2, rng);
        auto b = random_relu_network(2, {5, 2}, 3, rng);
        auto ab = parallel_compose(a, b);
        for (int k = 0; k < 5; ++k) {
            auto x = gaussian_point(2, rng);
            Vector expect(5);
            expect << a.eval(x), b.eval(x);
            CHECK((ab.eval(x) - expect).lpNorm<Eigen::Infinity>() <= 1e-12);
        }
    }
}

TEST_CASE("input replicator and pairwise stages") {
    CHECK(input_replicator(3, 4).eval(vec({1, 2, 3})) == vec({1, 2, 3, 3}));
    CHECK_THROWS_AS(input_replicator(3, 3), ArchitectureError);
    CHECK(pairwise_min(4).eval(vec({4, 1, -2, 6})) == vec({1, -2}));
    CHECK(pairwise_max(3).eval(vec({4, 1, -2})) == vec({4, -2}));
}

TEST_CASE("min and max networks") {
    CHECK(build_min_network(2).eval(vec({7, -1}))(0) == -1.0);
    CHECK(build_min_network(5).eval(vec({3, 1, 4, 1, 5}))(0) == 1.0);
    CHECK(build_max_network(5).eval(vec({3, 1, 4, 1, 5}))(0) == 5.0);
    CHECK_THROWS_AS(build_min_network(1), ArchitectureError);

    Rng rng(3);
    std::uniform_int_distribution<int> num(-4096, 4096);
    for (std::size_t k = 2; k <= 9; ++k) {
        auto mn = build_min_network(k);
        auto mx = build_max_network(k);
        for (int t = 0; t < 100; ++t) {
            Vector x(static_cast<Eigen::Index>(k));
            for (auto& v : x) v = num(rng) / 64.0;
            CHECK(mn.eval(x)(0) == x.minCoeff());
            CHECK(mx.eval(x)(0) == x.maxCoeff());
        }
    }
}

TEST_CASE("TLL validation") {
    CHECK_THROWS_AS(TllNetwork({TllComponent{mat({{1}, {1}}), vec({0, 0}), {{0}}}}), DegenerateInput);
    CHECK_THROWS_AS(TllNetwork({TllComponent{mat({{1}, {-1}}), vec({0, 0}), {{}}}}), ArchitectureError);
    CHECK_THROWS_AS(TllNetwork({TllComponent{mat({{1}, {-1}}), vec({0, 0}), {{2}}}}), ArchitectureError);
    // scaled copies are different functions
    CHECK_NOTHROW(TllNetwork({TllComponent{mat({{1}, {2}}), vec({0, 0}), {{0, 1}}}}));
    auto t = abs_tll();
    CHECK(t.local_count() == 2);
    CHECK(t.term_count() == 2);
}

TEST_CASE("TLL lattice evaluation") {
    CHECK(tll_eval_lattice(abs_tll(), vec({2}))(0) == 2.0);
    CHECK(tll_eval_lattice(abs_tll(), vec({-3}))(0) == 3.0);

    TllNetwork single_min({TllComponent{mat({{1}, {-1}, {2}}), vec({0, 1, -1}), {{0, 1, 2}}}});
    for (double x : {-2.0, 0.3, 4.0}) CHECK(tll_eval_lattice(single_min, vec({x}))(0) == std::min({x, 1 - x, 2 * x - 1}));

    TllNetwork one_local({TllComponent{mat({{3, -1}}), vec({0.5}), {{0}, {0}}}});
    CHECK(tll_eval_lattice(one_local, vec({1, 2}))(0) == 1.5);
    CHECK_THROWS_AS(tll_eval_lattice(one_local, vec({1})), DimensionMismatch);
}

TEST_CASE("TLL realization as a ReLU network") {
    auto net = tll_to_relu(abs_tll());
    CHECK(net.eval(vec({-3}))(0) == 3.0);
    CHECK(net.eval(vec({0}))(0) == 0.0);
    CHECK(net.eval(vec({3}))(0) == 3.0);

    TllNetwork affine({TllComponent{mat({{2, -1}}), vec({0.25}), {{0}}}});
    auto aff = tll_to_relu(affine);
    CHECK(aff.eval(vec({1, 1}))(0) == doctest::Approx(1.25));

    Rng rng(4);
    std::uniform_int_distribution<std::size_t> pick(1, 4);
    for (int t = 0; t < 20; ++t) {
        std::size_t n = 1 + t % 3, m = 1 + t % 2, N = pick(rng), M = pick(rng);
        auto tll = random_tll(n, m, N, M, rng);
        auto relu = tll_to_relu(tll);
        for (int k = 0; k < 200; ++k) {
            auto x = gaussian_point(n, rng);
            Vector lattice = tll_eval_lattice(tll, x);
            CHECK((relu.eval(x) - lattice).lpNorm<Eigen::Infinity>() <= 1e-9);
            for (std::size_t c = 0; c < m; ++c)
                CHECK(lattice(static_cast<Eigen::Index>(c)) == lattice_by_hand(tll.components()[c], x));
        }
    }
}
