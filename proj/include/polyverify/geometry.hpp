#pragma once

#include "polyverify/tolerances.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace polyverify {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Affine scalar map x -> w·x + c. The normal w must not vanish.
class LinearFunctional {
public:
    LinearFunctional(Vector w, double c, const Tolerances& tol = default_tolerances());

    const Vector& w() const { return w_; }
    double c() const { return c_; }
    std::size_t dim() const { return static_cast<std::size_t>(w_.size()); }

    double operator()(const Vector& x) const;

    /// Same hyperplane and orientation, with ‖w‖ = 1.
    LinearFunctional normalized() const;
    LinearFunctional negated() const;

private:
    Vector w_;
    double c_;
};

double eval_functional(const LinearFunctional& f, const Vector& x);

/// Whether two functionals coincide after unit normalization.
bool same_after_normalization(const LinearFunctional& a, const LinearFunctional& b,
                              const Tolerances& tol = default_tolerances());

/// x -> W x + b.
class AffineFunction {
public:
    AffineFunction(Matrix W, Vector b);

    const Matrix& W() const { return W_; }
    const Vector& b() const { return b_; }
    std::size_t input_dim() const { return static_cast<std::size_t>(W_.cols()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(W_.rows()); }

    Vector operator()(const Vector& x) const;

    /// The scalar map x -> [Wx + b]_i. Throws DegenerateInput if row i is zero.
    LinearFunctional row(std::size_t i) const;

private:
    Matrix W_;
    Vector b_;
};

/// Intersection of closed half-spaces {x : ℓ_i(x) <= 0}.
///
/// Constraints are stored unit-normalized, so ℓ_i(x) is a signed distance.
/// Constraints that coincide after normalization are collapsed; source_index()
/// maps each constraint as supplied to its stored position.
class Polytope {
public:
    explicit Polytope(std::size_t dim) : dim_(dim) {}
    Polytope(std::size_t dim, const std::vector<LinearFunctional>& constraints,
             const Tolerances& tol = default_tolerances());

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return constraints_.size(); }
    bool empty_description() const { return constraints_.empty(); }
    const std::vector<LinearFunctional>& constraints() const { return constraints_; }
    const LinearFunctional& operator[](std::size_t i) const { return constraints_[i]; }

    /// Stored index of the i-th constraint as supplied.
    std::size_t source_index(std::size_t supplied) const { return source_index_.at(supplied); }
    std::size_t supplied_count() const { return source_index_.size(); }

    /// max_i ℓ_i(x); -inf for an empty description.
    double max_violation(const Vector& x) const;
    bool contains(const Vector& x, double tol) const { return max_violation(x) <= tol; }

    Polytope subset(const std::vector<std::size_t>& indices) const;

    /// Rows w_i and offsets c_i stacked as A x + c <= 0.
    Matrix normals() const;
    Vector offsets() const;

private:
    std::size_t dim_;
    std::vector<LinearFunctional> constraints_;
    std::vector<std::size_t> source_index_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class Sense { Maximize, Minimize };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::optional<Vector> argpoint;
};

/// Optimize w·x + c over the polytope. Throws LpIterationLimit or DimensionMismatch.
LpSolution solve_lp(const Vector& w, double c, const Polytope& p, Sense sense,
                    const Tolerances& tol = default_tolerances());
LpSolution solve_lp(const LinearFunctional& objective, const Polytope& p, Sense sense,
                    const Tolerances& tol = default_tolerances());

struct InteriorPoint {
    Vector point;
    double clearance;  // min_i -ℓ_i(point), capped
};

/// Chebyshev-style center: the point maximizing the smallest distance to the
/// constraint hyperplanes, with the distance capped at `clearance_cap`.
/// Returns nothing unless the clearance reaches tol.interior.
std::optional<InteriorPoint> interior_point(const Polytope& p,
                                            const Tolerances& tol = default_tolerances(),
                                            double clearance_cap = 1.0);

/// Indices of the irredundant constraints of a full-dimensional polytope.
/// Constraint i is kept iff maximizing ℓ_i with constraint i dropped is unbounded
/// or exceeds tol.feasibility. Throws DegenerateInput when p has no interior.
std::vector<std::size_t> minimal_h_representation(const Polytope& p,
                                                   const Tolerances& tol = default_tolerances());

/// As above, for a caller that already established full-dimensionality.
std::vector<std::size_t> irredundant_constraints(const Polytope& p,
                                                 const Tolerances& tol = default_tolerances());

}  // namespace polyverify
