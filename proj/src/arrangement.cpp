#include "polyverify/arrangement.hpp"

#include "polyverify/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <thread>

namespace polyverify {

Arrangement::Arrangement(std::size_t dim, std::vector<LinearFunctional> oriented, Vector base_point,
                         std::vector<bool> flips, std::vector<FunctionalRef> source_map)
    : dim_(dim),
      functionals_(std::move(oriented)),
      base_point_(std::move(base_point)),
      flips_(std::move(flips)),
      source_map_(std::move(source_map)) {}

std::optional<FunctionalRef> Arrangement::locate(const LinearFunctional& f,
                                                 const Tolerances& tol) const {
    if (f.dim() != dim_) return std::nullopt;
    const LinearFunctional neg = f.negated();
    for (std::size_t k = 0; k < functionals_.size(); ++k) {
        if (same_after_normalization(functionals_[k], f, tol)) return FunctionalRef{k, true};
        if (same_after_normalization(functionals_[k], neg, tol)) return FunctionalRef{k, false};
    }
    return std::nullopt;
}

namespace {

struct Deduped {
    std::vector<LinearFunctional> unique;  // normalized, as first supplied
    std::vector<FunctionalRef> map;        // relative to `unique`
};

Deduped dedupe(const std::vector<LinearFunctional>& functionals, const Tolerances& tol) {
    if (functionals.empty()) throw DegenerateInput("arrangement needs at least one functional");
    const std::size_t dim = functionals.front().dim();
    Deduped d;
    for (const auto& f : functionals) {
        if (f.dim() != dim) {
            throw DimensionMismatch("arrangement functionals have dimensions " +
                                    std::to_string(dim) + " and " + std::to_string(f.dim()));
        }
        const LinearFunctional g = f.normalized();
        const LinearFunctional neg = g.negated();
        bool matched = false;
        for (std::size_t k = 0; k < d.unique.size() && !matched; ++k) {
            if (same_after_normalization(d.unique[k], g, tol)) {
                d.map.push_back({k, true});
                matched = true;
            } else if (same_after_normalization(d.unique[k], neg, tol)) {
                d.map.push_back({k, false});
                matched = true;
            }
        }
        if (!matched) {
            d.map.push_back({d.unique.size(), true});
            d.unique.push_back(g);
        }
    }
    return d;
}

bool generic(const std::vector<LinearFunctional>& fs, const Vector& x, const Tolerances& tol) {
    return std::all_of(fs.begin(), fs.end(),
                       [&](const LinearFunctional& f) { return std::abs(f(x)) > tol.interior; });
}

Arrangement orient(Deduped d, const Vector& base) {
    std::vector<bool> flips(d.unique.size(), false);
    std::vector<LinearFunctional> oriented;
    oriented.reserve(d.unique.size());
    for (std::size_t k = 0; k < d.unique.size(); ++k) {
        if (d.unique[k](base) < 0.0) {
            flips[k] = true;
            oriented.push_back(d.unique[k].negated());
        } else {
            oriented.push_back(d.unique[k]);
        }
    }
    for (auto& ref : d.map) {
        if (flips[ref.index]) ref.same_orientation = !ref.same_orientation;
    }
    const std::size_t dim = oriented.front().dim();
    return Arrangement(dim, std::move(oriented), base, std::move(flips), std::move(d.map));
}

}  // namespace

Arrangement build_arrangement(const std::vector<LinearFunctional>& functionals,
                              const ArrangementOptions& options) {
    Deduped d = dedupe(functionals, options.tol);
    const std::size_t dim = d.unique.front().dim();

    double scale = 0.0;
    for (const auto& f : d.unique) scale = std::max(scale, std::abs(f.c()));
    scale = std::clamp(10.0 * scale, 1.0, 1e6);

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector x(static_cast<Eigen::Index>(dim));
    for (std::size_t draw = 0; draw < options.max_draws; ++draw) {
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
        const double norm = x.norm();
        if (norm == 0.0) continue;
        const double radius = scale * std::pow(unit(rng), 1.0 / static_cast<double>(dim));
        x *= radius / norm;
        if (generic(d.unique, x, options.tol)) return orient(std::move(d), x);
    }
    throw DegenerateInput("no generic base point found after " +
                          std::to_string(options.max_draws) + " draws");
}

Arrangement build_arrangement(const std::vector<LinearFunctional>& functionals,
                              const Vector& base_point, const Tolerances& tol) {
    Deduped d = dedupe(functionals, tol);
    if (static_cast<std::size_t>(base_point.size()) != d.unique.front().dim()) {
        throw DimensionMismatch("base point dimension does not match the functionals");
    }
    if (!generic(d.unique, base_point, tol)) {
        throw DegenerateInput("base point lies within tolerance of a hyperplane");
    }
    return orient(std::move(d), base_point);
}

Polytope region_closure(const Arrangement& a, const RegionEncoding& r) {
    if (r.size() != a.size()) {
        throw DimensionMismatch("region encoding has " + std::to_string(r.size()) +
                                " bits, arrangement has " + std::to_string(a.size()) +
                                " functionals");
    }
    std::vector<LinearFunctional> constraints;
    constraints.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        constraints.push_back(r.test(i) ? a[i].negated() : a[i]);
    }
    return Polytope(a.dim(), constraints);
}

namespace {

std::vector<RegionEncoding> successors_from_boundary(const RegionEncoding& r,
                                                     const std::vector<std::size_t>& boundary) {
    std::vector<RegionEncoding> out;
    for (auto i : boundary) {
        if (r.test(i)) out.push_back(r.flipped(i));
    }
    return out;
}

}  // namespace

std::vector<RegionEncoding> find_successors(const Arrangement& a, const RegionEncoding& r,
                                            const Tolerances& tol) {
    const Polytope closure = region_closure(a, r);
    return successors_from_boundary(r, minimal_h_representation(closure, tol));
}

TraversalStats traverse_regions(const Arrangement& a, const RegionVisitor& visit,
                                const TraversalOptions& options) {
    TraversalStats stats;
    std::set<RegionEncoding> next{a.base_region()};
    std::mutex next_mutex;
    std::mutex visit_mutex;
    std::mutex stats_mutex;
    std::atomic<bool> stop{false};

    auto expand = [&](const RegionEncoding& r) {
        Polytope closure = region_closure(a, r);
        auto center = interior_point(closure, options.tol);
        std::size_t lps = 1;
        if (!center) {
            std::lock_guard lock(stats_mutex);
            stats.lp_calls += lps;
            ++stats.thin_regions;
            return;
        }
        RegionGeometry geom{r, std::move(closure), std::move(center->point), center->clearance, {}};
        geom.boundary = irredundant_constraints(geom.closure, options.tol);
        lps += geom.closure.size();
        auto succ = successors_from_boundary(r, geom.boundary);
        {
            std::lock_guard lock(stats_mutex);
            stats.lp_calls += lps;
            ++stats.regions;
            ++stats.level_counts.back();
        }
        bool keep_going = true;
        if (options.serialize_visits) {
            std::lock_guard lock(visit_mutex);
            keep_going = visit(geom);
        } else {
            keep_going = visit(geom);
        }
        if (!keep_going) stop.store(true);
        std::lock_guard lock(next_mutex);
        next.insert(succ.begin(), succ.end());
    };

    while (!next.empty() && !stop.load()) {
        // Largest encoding first within a level.
        std::vector<RegionEncoding> level(next.rbegin(), next.rend());
        next.clear();
        stats.level_counts.push_back(0);

        const std::size_t workers = std::min(std::max<std::size_t>(options.threads, 1), level.size());
        if (workers <= 1) {
            for (const auto& r : level) expand(r);
        } else {
            std::atomic<std::size_t> cursor{0};
            std::atomic<bool> failed{false};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    try {
                        for (std::size_t i = cursor++; i < level.size() && !failed.load(); i = cursor++) {
                            expand(level[i]);
                        }
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        failed.store(true);
                    }
                });
            }
            for (auto& t : pool) t.join();
            if (failure) std::rethrow_exception(failure);
        }
    }
    stats.stopped_early = stop.load() && !next.empty();
    return stats;
}

std::uint64_t region_count_bound(std::uint64_t hyperplanes, std::uint64_t dim) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    unsigned __int128 total = 0;
    unsigned __int128 binom = 1;  // C(N, 0)
    for (std::uint64_t k = 0; k <= dim && k <= hyperplanes; ++k) {
        total += binom;
        if (total > kMax) return kMax;
        binom = binom * (hyperplanes - k) / (k + 1);
        if (binom > kMax) {
            if (k + 1 <= dim && k + 1 <= hyperplanes) return kMax;
        }
    }
    return static_cast<std::uint64_t>(total);
}

}  // namespace polyverify
