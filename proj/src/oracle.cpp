#include "polyverify/oracle.hpp"

#include "polyverify/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace polyverify {

std::set<RegionEncoding> brute_force_regions(const Arrangement& a, const Tolerances& tol) {
    if (a.size() > kBruteForceMaxHyperplanes) {
        throw std::invalid_argument("brute_force_regions: " + std::to_string(a.size()) +
                                    " hyperplanes exceeds the guard of " +
                                    std::to_string(kBruteForceMaxHyperplanes));
    }
    std::set<RegionEncoding> regions;
    const std::uint64_t total = std::uint64_t{1} << a.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        const RegionEncoding r = RegionEncoding::from_integer(a.size(), mask);
        if (interior_point(region_closure(a, r), tol)) regions.insert(r);
    }
    return regions;
}

std::vector<Vector> hit_and_run(const Polytope& p, std::size_t samples, std::uint64_t seed,
                                const Tolerances& tol) {
    auto start = interior_point(p, tol);
    if (!start) throw DegenerateInput("hit_and_run: polytope has no interior");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const auto n = static_cast<Eigen::Index>(p.dim());
    Vector x = start->point;
    Vector d(n);
    auto step = [&] {
        do {
            for (Eigen::Index i = 0; i < n; ++i) d(i) = gauss(rng);
        } while (d.norm() == 0.0);
        d.normalize();
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const auto& f : p.constraints()) {
            const double slope = f.w().dot(d);
            const double slack = std::max(0.0, -f(x));
            if (slope > 0.0) hi = std::min(hi, slack / slope);
            if (slope < 0.0) lo = std::max(lo, slack / slope);
        }
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw DegenerateInput("hit_and_run: polytope is unbounded");
        }
        x += (lo + (hi - lo) * unit(rng)) * d;
    };

    constexpr std::size_t kBurnIn = 100;
    for (std::size_t i = 0; i < kBurnIn; ++i) step();
    std::vector<Vector> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        step();
        out.push_back(x);
    }
    return out;
}

std::optional<Violation> sample_falsify(const VerificationProblem& p, std::size_t trials,
                                        std::uint64_t seed, const Tolerances& tol) {
    if (trials == 0) throw std::invalid_argument("sample_falsify: trials must be at least 1");
    for (const Vector& x : hit_and_run(p.input, trials, seed, tol)) {
        const Vector y = eval(p.network, x);
        for (std::size_t i = 0; i < p.output.size(); ++i) {
            const double margin = p.output[i](y);
            if (margin > tol.feasibility) return Violation{x, i, margin};
        }
    }
    return std::nullopt;
}

namespace {

// The network is affine on the open ball of radius `clearance` around the
// witness, so central differences recover the piece exactly up to rounding.
AffineFunction affine_by_probing(const Network& net, const Vector& witness, double clearance) {
    const double h = 0.5 * clearance;
    const auto n = witness.size();
    const Vector f0 = eval(net, witness);
    Matrix W(f0.size(), n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Vector up = witness;
        Vector down = witness;
        up(k) += h;
        down(k) -= h;
        W.col(k) = (eval(net, up) - eval(net, down)) / (2.0 * h);
    }
    return AffineFunction(W, f0 - W * witness);
}

}  // namespace

Verdict exhaustive_verify(const VerificationProblem& p, const Tolerances& tol) {
    validate_problem(p, tol);
    Verdict verdict;
    if (auto v = empty_output_violation(p, tol)) {
        verdict.status = VerdictStatus::Unsat;
        verdict.violation = *v;
        return verdict;
    }
    const Arrangement a = build_arrangement(verification_functionals(p, tol),
                                            ArrangementOptions{kDefaultOracleSeed, 1000, tol});
    for (const RegionEncoding& r : brute_force_regions(a, tol)) {
        ++verdict.stats.regions_traversed;
        const Polytope closure = region_closure(a, r);
        const auto center = interior_point(closure, tol);
        if (!center || p.input.max_violation(center->point) > 0.0) continue;
        ++verdict.stats.regions_verified;
        const AffineFunction piece = affine_by_probing(p.network, center->point, center->clearance);
        for (std::size_t i = 0; i < p.output.size(); ++i) {
            const LinearFunctional& out = p.output[i];
            const LpSolution sol = solve_lp(piece.W().transpose() * out.w(),
                                            out.w().dot(piece.b()) + out.c(), closure,
                                            Sense::Maximize, tol);
            ++verdict.stats.lp_calls;
            if (sol.status != LpStatus::Optimal || sol.objective <= tol.feasibility) continue;
            const Vector& x = *sol.argpoint;
            const double margin = out(eval(p.network, x));
            if (margin > tol.feasibility && p.input.max_violation(x) <= tol.feasibility) {
                if (!verdict.violation || margin > verdict.violation->margin) {
                    verdict.violation = Violation{x, i, margin};
                }
            }
        }
    }
    verdict.status = verdict.violation ? VerdictStatus::Unsat : VerdictStatus::Sat;
    return verdict;
}

OracleReport check_enumeration(const Arrangement& a, const Tolerances& tol) {
    std::set<RegionEncoding> traversed;
    std::ostringstream details;
    TraversalOptions opts;
    opts.tol = tol;
    traverse_regions(a, [&](const RegionGeometry& g) {
        if (!traversed.insert(g.encoding).second) {
            details << "region " << g.encoding.to_hex() << " visited twice; ";
        }
        return true;
    }, opts);
    const auto reference = brute_force_regions(a, tol);
    for (const auto& r : reference) {
        if (!traversed.count(r)) details << "missed region " << r.to_hex() << "; ";
    }
    for (const auto& r : traversed) {
        if (!reference.count(r)) details << "spurious region " << r.to_hex() << "; ";
    }
    OracleReport report;
    report.details = details.str();
    report.agreed = report.details.empty();
    return report;
}

OracleReport check_verdict(const VerificationProblem& p, const Verdict& verdict, std::size_t trials,
                           std::uint64_t seed, const Tolerances& tol) {
    std::ostringstream details;
    const Verdict reference = exhaustive_verify(p, tol);
    if (reference.status != verdict.status) {
        details << "verify says " << (verdict.status == VerdictStatus::Sat ? "SAT" : "UNSAT")
                << ", exhaustive_verify says "
                << (reference.status == VerdictStatus::Sat ? "SAT" : "UNSAT") << "; ";
    }
    if (verdict.status == VerdictStatus::Sat) {
        if (auto cx = sample_falsify(p, trials, seed, tol)) {
            details << "sampling found a violation of output constraint " << cx->constraint
                    << " with margin " << cx->margin << "; ";
        }
    } else if (verdict.violation) {
        const Violation& v = *verdict.violation;
        const double margin = p.output[v.constraint](eval(p.network, v.witness));
        if (p.input.max_violation(v.witness) > tol.feasibility) details << "witness lies outside P_x; ";
        if (!(margin > 0.0)) details << "witness does not violate the output constraint; ";
    }
    OracleReport report;
    report.details = details.str();
    report.agreed = report.details.empty();
    return report;
}

}  // namespace polyverify
