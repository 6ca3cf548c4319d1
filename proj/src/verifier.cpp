#include "polyverify/verifier.hpp"

#include "polyverify/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>

namespace polyverify {

std::size_t input_dim(const Network& net) {
    return std::visit([](const auto& n) { return n.input_dim(); }, net);
}

std::size_t output_dim(const Network& net) {
    return std::visit([](const auto& n) { return n.output_dim(); }, net);
}

Vector eval(const Network& net, const Vector& x) {
    if (const auto* relu = std::get_if<ReluNetwork>(&net)) return relu->eval(x);
    return tll_eval_lattice(std::get<TllNetwork>(net), x);
}

void validate_problem(const VerificationProblem& p, const Tolerances& tol) {
    if (const auto* relu = std::get_if<ReluNetwork>(&p.network); relu && !relu->is_shallow()) {
        throw ArchitectureError("only shallow (one hidden ReLU layer) or TLL networks can be verified");
    }
    if (p.input.dim() != input_dim(p.network)) {
        throw DimensionMismatch("input polytope has dimension " + std::to_string(p.input.dim()) +
                                ", network expects " + std::to_string(input_dim(p.network)));
    }
    if (p.output.dim() != output_dim(p.network)) {
        throw DimensionMismatch("output polytope has dimension " + std::to_string(p.output.dim()) +
                                ", network produces " + std::to_string(output_dim(p.network)));
    }
    if (!interior_point(p.input, tol)) {
        throw DegenerateInput("input polytope is empty or not full-dimensional");
    }
    for (std::size_t k = 0; k < p.input.dim(); ++k) {
        Vector e = Vector::Unit(static_cast<Eigen::Index>(p.input.dim()), static_cast<Eigen::Index>(k));
        for (auto sense : {Sense::Maximize, Sense::Minimize}) {
            if (solve_lp(e, 0.0, p.input, sense, tol).status != LpStatus::Optimal) {
                throw DegenerateInput("input polytope is unbounded along coordinate " + std::to_string(k));
            }
        }
    }
}

// ---- shallow ----

std::vector<LinearFunctional> switching_functionals_shallow(const ReluNetwork& net,
                                                            const Tolerances& tol) {
    if (!net.is_shallow()) throw ArchitectureError("switching_functionals_shallow: network is not shallow");
    const auto& hidden = net.layers().front();
    std::vector<LinearFunctional> out;
    for (Eigen::Index i = 0; i < hidden.W.rows(); ++i) {
        if (hidden.W.row(i).cwiseAbs().maxCoeff() <= tol.zero) continue;
        out.emplace_back(hidden.W.row(i).transpose(), hidden.b(i), tol);
    }
    return out;
}

ShallowActivation::ShallowActivation(const ReluNetwork& net, const Arrangement& a,
                                     const Tolerances& tol)
    : net_(&net) {
    if (!net.is_shallow()) throw ArchitectureError("ShallowActivation: network is not shallow");
    const auto& hidden = net.layers().front();
    const auto neurons = static_cast<std::size_t>(hidden.W.rows());
    refs_.resize(neurons);
    constant_active_.assign(neurons, false);
    for (std::size_t i = 0; i < neurons; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        if (hidden.W.row(row).cwiseAbs().maxCoeff() <= tol.zero) {
            constant_active_[i] = hidden.b(row) > 0.0;
            continue;
        }
        refs_[i] = a.locate(LinearFunctional(hidden.W.row(row).transpose(), hidden.b(row), tol), tol);
        if (!refs_[i]) {
            throw InvariantViolation("neuron " + std::to_string(i) + " has no hyperplane in the arrangement");
        }
    }
}

AffineFunction ShallowActivation::active_affine(const RegionEncoding& r) const {
    const auto& hidden = net_->layers()[0];
    const auto& out = net_->layers()[1];
    Vector d(static_cast<Eigen::Index>(refs_.size()));
    for (std::size_t i = 0; i < refs_.size(); ++i) {
        const bool active = refs_[i] ? positive_on(*refs_[i], r) : constant_active_[i];
        d(static_cast<Eigen::Index>(i)) = active ? 1.0 : 0.0;
    }
    const Matrix masked = out.W * d.asDiagonal();
    return AffineFunction(masked * hidden.W, masked * hidden.b + out.b);
}

AffineFunction active_affine_shallow(const ReluNetwork& net, const RegionEncoding& r,
                                     const Arrangement& a) {
    return ShallowActivation(net, a).active_affine(r);
}

// ---- TLL ----

std::vector<LinearFunctional> switching_functionals_tll(const TllNetwork& t, const Tolerances& tol) {
    std::vector<LinearFunctional> out;
    for (const auto& comp : t.components()) {
        for (Eigen::Index i = 0; i < comp.W.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < comp.W.rows(); ++j) {
                Vector w = (comp.W.row(i) - comp.W.row(j)).transpose();
                if (w.cwiseAbs().maxCoeff() <= tol.zero) continue;
                out.emplace_back(std::move(w), comp.b(i) - comp.b(j), tol);
            }
        }
    }
    return out;
}

TllActivation::TllActivation(const TllNetwork& t, const Arrangement& a, const Tolerances& tol)
    : net_(&t) {
    const auto N = static_cast<Eigen::Index>(t.local_count());
    for (const auto& comp : t.components()) {
        std::vector<Pair> pairs;
        for (Eigen::Index i = 0; i < N; ++i) {
            for (Eigen::Index j = i + 1; j < N; ++j) {
                Vector w = (comp.W.row(i) - comp.W.row(j)).transpose();
                const double c = comp.b(i) - comp.b(j);
                Pair p;
                if (w.cwiseAbs().maxCoeff() <= tol.zero) {
                    p.constant_greater = c > 0.0;
                } else {
                    p.ref = a.locate(LinearFunctional(std::move(w), c, tol), tol);
                    if (!p.ref) {
                        throw InvariantViolation("local-function difference has no hyperplane in the arrangement");
                    }
                }
                pairs.push_back(p);
            }
        }
        pairs_.push_back(std::move(pairs));
    }
}

std::vector<std::size_t> TllActivation::order_on(std::size_t k, const RegionEncoding& r) const {
    const std::size_t N = net_->local_count();
    // wins[i] = number of local functions that ℓ_i exceeds on r.
    std::vector<std::size_t> wins(N, 0);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i + 1; j < N; ++j, ++idx) {
            const Pair& p = pairs_[k][idx];
            const bool i_greater = p.ref ? positive_on(*p.ref, r) : p.constant_greater;
            ++wins[i_greater ? i : j];
        }
    }
    // A tournament is a total order exactly when its scores are 0..N-1.
    std::vector<std::size_t> order(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        if (order[wins[i]] != N) {
            throw InvariantViolation("pairwise order of local functions on region " + r.to_hex() +
                                     " contains a cycle");
        }
        order[wins[i]] = i;
    }
    return order;
}

std::size_t TllActivation::active_index(std::size_t k, const RegionEncoding& r) const {
    const auto order = order_on(k, r);
    std::vector<std::size_t> rank(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos;

    std::size_t best = 0;
    bool have_best = false;
    for (const auto& s : net_->components()[k].selectors) {
        const std::size_t term = *std::min_element(
            s.begin(), s.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
        if (!have_best || rank[term] > rank[best]) {
            best = term;
            have_best = true;
        }
    }
    return best;
}

AffineFunction TllActivation::active_affine(const RegionEncoding& r) const {
    const auto m = static_cast<Eigen::Index>(net_->output_dim());
    const auto n = static_cast<Eigen::Index>(net_->input_dim());
    Matrix W(m, n);
    Vector b(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto& comp = net_->components()[static_cast<std::size_t>(k)];
        const auto i = static_cast<Eigen::Index>(active_index(static_cast<std::size_t>(k), r));
        W.row(k) = comp.W.row(i);
        b(k) = comp.b(i);
    }
    return AffineFunction(std::move(W), std::move(b));
}

AffineFunction active_affine_tll(const TllNetwork& t, const RegionEncoding& r, const Arrangement& a) {
    return TllActivation(t, a).active_affine(r);
}

// ---- driver ----

std::vector<LinearFunctional> verification_functionals(const VerificationProblem& p,
                                                       const Tolerances& tol) {
    std::vector<LinearFunctional> fs;
    if (const auto* relu = std::get_if<ReluNetwork>(&p.network)) {
        fs = switching_functionals_shallow(*relu, tol);
    } else {
        fs = switching_functionals_tll(std::get<TllNetwork>(p.network), tol);
    }
    fs.insert(fs.end(), p.input.constraints().begin(), p.input.constraints().end());
    return fs;
}

std::optional<Violation> empty_output_violation(const VerificationProblem& p, const Tolerances& tol) {
    const Vector zero = Vector::Zero(static_cast<Eigen::Index>(p.output.dim()));
    if (solve_lp(zero, 0.0, p.output, Sense::Maximize, tol).status != LpStatus::Infeasible) {
        return std::nullopt;
    }
    auto center = interior_point(p.input, tol);
    if (!center) throw DegenerateInput("input polytope is empty or not full-dimensional");
    const Vector y = eval(p.network, center->point);
    Violation v{center->point, 0, -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < p.output.size(); ++i) {
        const double value = p.output[i](y);
        if (value > v.margin) {
            v.margin = value;
            v.constraint = i;
        }
    }
    return v;
}

namespace {

using Activation = std::variant<ShallowActivation, TllActivation>;

Activation make_activation(const Network& net, const Arrangement& a, const Tolerances& tol) {
    if (const auto* relu = std::get_if<ReluNetwork>(&net)) return ShallowActivation(*relu, a, tol);
    return TllActivation(std::get<TllNetwork>(net), a, tol);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Re-check a candidate against the network itself; nudge toward the region
// witness if the LP vertex sits a hair outside.
std::optional<Violation> confirm(const VerificationProblem& p, std::size_t constraint,
                                 const Vector& argpoint, const Vector& witness, const Tolerances& tol) {
    for (double pull : {0.0, 1e-6, 1e-3}) {
        const Vector x = argpoint + pull * (witness - argpoint);
        if (p.input.max_violation(x) > tol.feasibility) continue;
        const double margin = p.output[constraint](eval(p.network, x));
        if (margin > tol.feasibility) return Violation{x, constraint, margin};
    }
    return std::nullopt;
}

}  // namespace

Verdict verify(const VerificationProblem& p, const VerifyOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const Tolerances& tol = options.tol;
    validate_problem(p, tol);

    Verdict verdict;
    if (auto v = empty_output_violation(p, tol)) {
        verdict.status = VerdictStatus::Unsat;
        verdict.violation = *v;
        if (options.exhaustive) verdict.all_violations.push_back(*v);
        verdict.stats.lp_calls = 1;
        verdict.stats.wall_time_ms = elapsed_ms(start);
        return verdict;
    }

    const Arrangement arrangement =
        build_arrangement(verification_functionals(p, tol), ArrangementOptions{options.seed, 1000, tol});
    const Activation activation = make_activation(p.network, arrangement, tol);
    std::vector<FunctionalRef> input_refs;
    for (const auto& f : p.input.constraints()) {
        auto ref = arrangement.locate(f, tol);
        if (!ref) throw InvariantViolation("input constraint missing from the arrangement");
        input_refs.push_back(*ref);
    }

    std::mutex mutex;
    std::size_t lp_calls = 0;
    std::vector<std::pair<RegionEncoding, Violation>> found_all;

    auto visit = [&](const RegionGeometry& g) -> bool {
        for (const auto& ref : input_refs) {
            if (positive_on(ref, g.encoding)) return true;  // outside P_x
        }
        const AffineFunction affine =
            std::visit([&](const auto& act) { return act.active_affine(g.encoding); }, activation);

        std::vector<Violation> found;
        std::size_t marginal = 0;
        std::size_t unconfirmed = 0;
        for (std::size_t i = 0; i < p.output.size(); ++i) {
            const LinearFunctional& out = p.output[i];
            const Vector w = affine.W().transpose() * out.w();
            const double c = out.w().dot(affine.b()) + out.c();
            const LpSolution sol = solve_lp(w, c, g.closure, Sense::Maximize, tol);
            if (sol.status == LpStatus::Unbounded) {
                throw InvariantViolation("output LP unbounded on a region inside a bounded input polytope");
            }
            if (sol.status != LpStatus::Optimal) {
                throw InvariantViolation("output LP infeasible on region " + g.encoding.to_hex());
            }
            if (sol.objective > tol.feasibility) {
                if (auto v = confirm(p, i, *sol.argpoint, g.witness, tol)) {
                    found.push_back(std::move(*v));
                    if (!options.exhaustive) break;
                } else {
                    ++unconfirmed;
                }
            } else if (sol.objective > 0.0) {
                ++marginal;
            }
        }

        std::lock_guard lock(mutex);
        lp_calls += p.output.size();
        ++verdict.stats.regions_verified;
        verdict.stats.marginal += marginal;
        verdict.stats.unconfirmed += unconfirmed;
        if (options.record_regions) {
            verdict.kept_regions.push_back(g.encoding);
            verdict.kept_closures.push_back(g.closure);
        }
        for (auto& v : found) found_all.emplace_back(g.encoding, std::move(v));
        return options.exhaustive || found_all.empty();
    };

    TraversalOptions topts;
    topts.threads = options.threads;
    topts.serialize_visits = options.threads <= 1;
    topts.tol = tol;
    const TraversalStats ts = traverse_regions(arrangement, visit, topts);

    // Serial visiting order: larger encodings first, then constraint index.
    std::sort(found_all.begin(), found_all.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second.constraint < b.second.constraint;
    });
    for (auto& [region, v] : found_all) {
        if (options.exhaustive) {
            if (!verdict.violation || v.margin > verdict.violation->margin) verdict.violation = v;
            verdict.all_violations.push_back(v);
        } else if (!verdict.violation) {
            verdict.violation = v;
        }
    }
    if (options.record_regions) {
        std::vector<std::size_t> order(verdict.kept_regions.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return verdict.kept_regions[a] > verdict.kept_regions[b];
        });
        std::vector<RegionEncoding> regions;
        std::vector<Polytope> closures;
        for (auto i : order) {
            regions.push_back(std::move(verdict.kept_regions[i]));
            closures.push_back(std::move(verdict.kept_closures[i]));
        }
        verdict.kept_regions = std::move(regions);
        verdict.kept_closures = std::move(closures);
    }

    verdict.status = verdict.violation ? VerdictStatus::Unsat : VerdictStatus::Sat;
    verdict.stats.regions_traversed = ts.regions;
    verdict.stats.thin_regions = ts.thin_regions;
    verdict.stats.lp_calls = ts.lp_calls + lp_calls + 1;  // +1 for the P_y emptiness check
    verdict.stats.wall_time_ms = elapsed_ms(start);
    return verdict;
}

}  // namespace polyverify
