#pragma once

#include "polyverify/geometry.hpp"
#include "polyverify/region_encoding.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace polyverify {

/// Where a supplied functional ended up after deduplication and orientation:
/// it is a positive multiple of functional `index` if `same_orientation`,
/// otherwise of its negation.
struct FunctionalRef {
    std::size_t index = 0;
    bool same_orientation = true;
};

/// Hyperplane arrangement oriented so that every functional is strictly
/// positive at the base point. The base region is therefore encoded by all ones.
class Arrangement {
public:
    Arrangement(std::size_t dim, std::vector<LinearFunctional> oriented, Vector base_point,
                std::vector<bool> flips, std::vector<FunctionalRef> source_map);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return functionals_.size(); }
    const std::vector<LinearFunctional>& functionals() const { return functionals_; }
    const LinearFunctional& operator[](std::size_t i) const { return functionals_[i]; }
    const Vector& base_point() const { return base_point_; }
    /// flips[k]: stored functional k is the negation of the (normalized) functional supplied first for it.
    const std::vector<bool>& orientation_flips() const { return flips_; }
    const std::vector<FunctionalRef>& source_map() const { return source_map_; }
    std::size_t supplied_count() const { return source_map_.size(); }

    /// Finds the stored functional defining the same hyperplane as f.
    std::optional<FunctionalRef> locate(const LinearFunctional& f,
                                        const Tolerances& tol = default_tolerances()) const;

    RegionEncoding base_region() const { return RegionEncoding::all_ones(size()); }

private:
    std::size_t dim_;
    std::vector<LinearFunctional> functionals_;
    Vector base_point_;
    std::vector<bool> flips_;
    std::vector<FunctionalRef> source_map_;
};

/// Whether the functional behind `ref` is positive on region r.
inline bool positive_on(const FunctionalRef& ref, const RegionEncoding& r) {
    return r.test(ref.index) == ref.same_orientation;
}

struct ArrangementOptions {
    std::uint64_t seed = 0xC0FFEE;
    std::size_t max_draws = 1000;
    Tolerances tol{};
};

/// Deduplicates the functionals (up to positive scaling and sign), samples a
/// generic base point and orients every functional to be positive there.
Arrangement build_arrangement(const std::vector<LinearFunctional>& functionals,
                              const ArrangementOptions& options = {});
/// Same, with a caller-chosen base point that must avoid every hyperplane by tol.interior.
Arrangement build_arrangement(const std::vector<LinearFunctional>& functionals,
                              const Vector& base_point, const Tolerances& tol = default_tolerances());

/// Closure of the region: -ℓ_i <= 0 where bit i is set, ℓ_i <= 0 otherwise.
Polytope region_closure(const Arrangement& a, const RegionEncoding& r);

/// Regions one rank above r: flip each set bit whose hyperplane supports a facet of r.
std::vector<RegionEncoding> find_successors(const Arrangement& a, const RegionEncoding& r,
                                            const Tolerances& tol = default_tolerances());

struct RegionGeometry {
    RegionEncoding encoding;
    Polytope closure;
    Vector witness;
    double clearance = 0.0;
    std::vector<std::size_t> boundary;  // indices of facet-defining functionals
};

struct TraversalOptions {
    std::size_t threads = 1;
    // With false, the visitor may run concurrently from several workers.
    bool serialize_visits = true;
    Tolerances tol{};
};

struct TraversalStats {
    std::size_t regions = 0;
    std::size_t lp_calls = 0;
    std::vector<std::size_t> level_counts;
    // Successors whose interior fell below tol.interior and were dropped.
    std::size_t thin_regions = 0;
    bool stopped_early = false;
};

/// Return false to stop the traversal. The level in progress is still finished,
/// so which regions get visited does not depend on the number of workers.
using RegionVisitor = std::function<bool(const RegionGeometry&)>;

/// Visits every full-dimensional region once, level by level in rank order,
/// starting from the base region.
TraversalStats traverse_regions(const Arrangement& a, const RegionVisitor& visit,
                                const TraversalOptions& options = {});

/// Upper bound on the number of regions of N hyperplanes in dimension n: Σ_{k<=n} C(N,k).
/// Saturates at UINT64_MAX.
std::uint64_t region_count_bound(std::uint64_t hyperplanes, std::uint64_t dim);

}  // namespace polyverify
