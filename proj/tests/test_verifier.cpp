#include "polyverify/errors.hpp"
#include "polyverify/generators.hpp"
#include "polyverify/oracle.hpp"
#include "polyverify/verifier.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace polyverify;
using testing::lf;
using testing::mat;
using testing::vec;

namespace {

ReluNetwork relu_identity() {
    return ReluNetwork({Layer{mat({{1}}), vec({0}), true}, Layer{mat({{1}}), vec({0}), false}});
}

TllNetwork abs_tll() {
    return TllNetwork({TllComponent{mat({{1}, {-1}}), vec({0, 0}), {{0}, {1}}}});
}

Polytope interval(double lo, double hi) { return box(1, lo, hi); }

RegionEncoding region_containing(const Arrangement& a, const Vector& x) {
    RegionEncoding r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.set(i, a[i](x) > 0);
    return r;
}

double max_margin(const Polytope& out, const Vector& y) { return out.max_violation(y); }

}  // namespace

TEST_CASE("shallow switching functionals") {
    ReluNetwork net({Layer{mat({{1}, {-1}}), vec({0, 1}), true}, Layer{mat({{1, 1}}), vec({0}), false}});
    auto fs = switching_functionals_shallow(net);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0](vec({3})) == 3.0);
    CHECK(fs[1](vec({3})) == -2.0);

    Rng rng(1);
    CHECK(switching_functionals_shallow(random_shallow_network(3, 5, 2, rng)).size() == 5);
    CHECK_THROWS_AS(switching_functionals_shallow(build_min_network(4)), ArchitectureError);

    // duplicate neurons collapse in the arrangement but both map back
    ReluNetwork dup({Layer{mat({{1, 1}, {2, 2}, {1, -1}}), vec({0, 0, 0}), true},
                     Layer{mat({{1, 1, 1}}), vec({0}), false}});
    auto a = build_arrangement(switching_functionals_shallow(dup));
    CHECK(a.size() == 2);
    CHECK(a.source_map()[0].index == a.source_map()[1].index);
}

TEST_CASE("shallow active affine map") {
    auto net = relu_identity();
    auto a = build_arrangement(switching_functionals_shallow(net));
    auto pos = active_affine_shallow(net, region_containing(a, vec({1})), a);
    auto neg = active_affine_shallow(net, region_containing(a, vec({-1})), a);
    CHECK(pos(vec({0.7}))(0) == doctest::Approx(0.7));
    CHECK(neg(vec({0.7}))(0) == 0.0);
    CHECK(neg.W()(0, 0) == 0.0);

    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        std::size_t n = 1 + t % 3;
        auto net2 = random_shallow_network(n, 2 + t % 6, 1 + t % 2, rng);
        auto arr = build_arrangement(switching_functionals_shallow(net2));
        ShallowActivation act(net2, arr);
        traverse_regions(arr, [&](const RegionGeometry& g) {
            auto f = act.active_affine(g.encoding);
            CHECK((f(g.witness) - net2.eval(g.witness)).lpNorm<Eigen::Infinity>() <= 1e-9);
            return true;
        });
    }
}

TEST_CASE("TLL switching functionals") {
    CHECK(switching_functionals_tll(abs_tll()).size() == 1);
    auto d = switching_functionals_tll(abs_tll()).front();
    CHECK(d(vec({1.5})) == 3.0);
    CHECK(d.c() == 0.0);

    Rng rng(3);
    CHECK(switching_functionals_tll(random_tll(2, 2, 3, 2, rng)).size() == 6);
    CHECK(switching_functionals_tll(random_tll(2, 1, 2, 2, rng)).size() == 1);
}

TEST_CASE("TLL active affine map") {
    auto t = abs_tll();
    auto a = build_arrangement(switching_functionals_tll(t));
    TllActivation act(t, a);
    auto right = region_containing(a, vec({1}));
    auto left = region_containing(a, vec({-1}));
    CHECK(act.order_on(0, right) == std::vector<std::size_t>{1, 0});
    CHECK(act.active_index(0, right) == 0);
    CHECK(act.active_index(0, left) == 1);
    CHECK(active_affine_tll(t, right, a)(vec({0.4}))(0) == doctest::Approx(0.4));
    CHECK(active_affine_tll(t, left, a)(vec({-0.4}))(0) == doctest::Approx(0.4));

    // parallel local functions never switch: their order comes from the constant gap
    TllNetwork parallel({TllComponent{mat({{1}, {1}, {-1}}), vec({0, 1, 0}), {{0, 1}, {2}}}});
    auto pa = build_arrangement(switching_functionals_tll(parallel));
    TllActivation pact(parallel, pa);
    traverse_regions(pa, [&](const RegionGeometry& g) {
        CHECK(pact.active_affine(g.encoding)(g.witness)(0) == doctest::Approx(tll_eval_lattice(parallel, g.witness)(0)));
        return true;
    });

    Rng rng(4);
    for (int k = 0; k < 20; ++k) {
        auto tll = random_tll(1 + k % 2, 1 + k % 2, 1 + k % 4, 1 + k % 3, rng);
        auto fs = switching_functionals_tll(tll);
        if (fs.empty()) continue;
        auto arr = build_arrangement(fs);
        TllActivation ta(tll, arr);
        traverse_regions(arr, [&](const RegionGeometry& g) {
            auto f = ta.active_affine(g.encoding);
            CHECK((f(g.witness) - tll_eval_lattice(tll, g.witness)).lpNorm<Eigen::Infinity>() <= 1e-9);
            return true;
        });
    }
}

TEST_CASE("inconsistent pairwise signs are an invariant violation") {
    TllNetwork three({TllComponent{mat({{1, 0}, {0, 1}, {-1, -1}}), vec({0, 0, 0}), {{0}, {1}, {2}}}});
    auto a = build_arrangement(switching_functionals_tll(three));
    REQUIRE(a.size() == 3);
    TllActivation act(three, a);
    // find an encoding that orders the three functions cyclically
    bool threw = false;
    for (std::uint64_t v = 0; v < 8; ++v) {
        try {
            act.active_affine(RegionEncoding::from_integer(3, v));
        } catch (const InvariantViolation&) {
            threw = true;
        }
    }
    CHECK(threw);
}

TEST_CASE("problem validation") {
    VerificationProblem ok{relu_identity(), interval(-1, 1), interval(0, 1)};
    CHECK_NOTHROW(validate_problem(ok));
    VerificationProblem unbounded{relu_identity(), Polytope(1, {lf({1}, -1)}), interval(0, 1)};
    CHECK_THROWS_AS(validate_problem(unbounded), DegenerateInput);
    VerificationProblem flat{relu_identity(), interval(1, 1), interval(0, 1)};
    CHECK_THROWS_AS(validate_problem(flat), DegenerateInput);
    VerificationProblem wrong_dim{relu_identity(), box(2, -1, 1), interval(0, 1)};
    CHECK_THROWS_AS(validate_problem(wrong_dim), DimensionMismatch);
    VerificationProblem deep{build_min_network(4), box(4, -1, 1), interval(0, 1)};
    CHECK_THROWS_AS(validate_problem(deep), ArchitectureError);
}

TEST_CASE("ReLU(x) problems") {
    auto unsat = verify({relu_identity(), interval(-1, 1), interval(0, 0.5)});
    REQUIRE(unsat.status == VerdictStatus::Unsat);
    REQUIRE(unsat.violation);
    CHECK(unsat.violation->witness(0) == doctest::Approx(1.0));
    CHECK(unsat.violation->margin == doctest::Approx(0.5));

    auto sat = verify({relu_identity(), interval(-1, 1), interval(-0.1, 1.1)});
    CHECK(sat.status == VerdictStatus::Sat);
    CHECK_FALSE(sat.violation);
    CHECK(sat.stats.regions_verified >= 2);
}

TEST_CASE("|x| TLL problems") {
    CHECK(verify({abs_tll(), interval(-2, 2), interval(-0.5, 2.5)}).status == VerdictStatus::Sat);
    auto v = verify({abs_tll(), interval(-2, 2), interval(-0.5, 1.5)});
    REQUIRE(v.status == VerdictStatus::Unsat);
    CHECK(std::abs(v.violation->witness(0)) > 1.5);
    CHECK(v.violation->margin == doctest::Approx(0.5));
}

TEST_CASE("empty output polytope") {
    VerificationProblem p{relu_identity(), interval(-1, 1), Polytope(1, {lf({1}, 0), lf({-1}, 1)})};
    auto v = verify(p);
    REQUIRE(v.status == VerdictStatus::Unsat);
    CHECK(interval(-1, 1).contains(v.violation->witness, 1e-9));
}

TEST_CASE("exhaustive mode collects every violating region") {
    auto v = verify({abs_tll(), interval(-2, 2), interval(-0.5, 1.5)}, VerifyOptions{true});
    REQUIRE(v.status == VerdictStatus::Unsat);
    CHECK(v.all_violations.size() == 2);
    for (const auto& w : v.all_violations) CHECK(std::abs(w.witness(0)) > 1.5);
}

TEST_CASE("random problems: soundness, scaling invariance, agreement with sampling") {
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        Network net = t % 2 ? Network(random_shallow_network(2, 4, 2, rng)) : Network(random_tll(2, 2, 3, 2, rng));
        auto p = random_problem(net, rng);
        auto v = verify(p);
        if (v.violation) {
            CHECK(p.input.max_violation(v.violation->witness) <= 1e-9);
            CHECK(max_margin(p.output, eval(p.network, v.violation->witness)) > 0);
        }
        std::vector<LinearFunctional> scaled;
        for (const auto& c : p.output.constraints()) scaled.emplace_back(3.5 * c.w(), 3.5 * c.c());
        VerificationProblem q{p.network, p.input, Polytope(p.output.dim(), scaled)};
        CHECK(verify(q).status == v.status);
        if (sample_falsify(p, 2000, 7 + t)) CHECK(v.status == VerdictStatus::Unsat);
    }
}

TEST_CASE("thread count does not change the verdict") {
    Rng rng(6);
    for (int t = 0; t < 6; ++t) {
        auto p = random_problem(random_shallow_network(2, 6, 2, rng), rng);
        VerifyOptions serial, parallel;
        parallel.threads = 4;
        auto a = verify(p, serial);
        auto b = verify(p, parallel);
        CHECK(a.status == b.status);
        CHECK(a.stats.regions_traversed == b.stats.regions_traversed);
        if (a.violation) CHECK(a.violation->witness == b.violation->witness);
    }
}
