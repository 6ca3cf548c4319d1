#include "polyverify/geometry.hpp"

#include "polyverify/errors.hpp"
#include "polyverify/lp.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace polyverify {

namespace {

void require_dim(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        throw DimensionMismatch(std::string(what) + ": expected dimension " +
                                std::to_string(expected) + ", got " + std::to_string(got));
    }
}

}  // namespace

LinearFunctional::LinearFunctional(Vector w, double c, const Tolerances& tol)
    : w_(std::move(w)), c_(c) {
    if (w_.size() == 0 || w_.cwiseAbs().maxCoeff() <= tol.zero) {
        throw DegenerateInput("linear functional has a zero normal vector");
    }
}

double LinearFunctional::operator()(const Vector& x) const {
    require_dim(dim(), static_cast<std::size_t>(x.size()), "LinearFunctional");
    return w_.dot(x) + c_;
}

LinearFunctional LinearFunctional::normalized() const {
    const double n = w_.norm();
    return LinearFunctional(w_ / n, c_ / n);
}

LinearFunctional LinearFunctional::negated() const { return LinearFunctional(-w_, -c_); }

double eval_functional(const LinearFunctional& f, const Vector& x) { return f(x); }

bool same_after_normalization(const LinearFunctional& a, const LinearFunctional& b,
                              const Tolerances& tol) {
    if (a.dim() != b.dim()) return false;
    const LinearFunctional na = a.normalized();
    const LinearFunctional nb = b.normalized();
    const double scale = std::max(1.0, std::max(std::abs(na.c()), std::abs(nb.c())));
    return (na.w() - nb.w()).cwiseAbs().maxCoeff() <= tol.zero &&
           std::abs(na.c() - nb.c()) <= tol.zero * scale;
}

AffineFunction::AffineFunction(Matrix W, Vector b) : W_(std::move(W)), b_(std::move(b)) {
    if (W_.rows() != b_.size()) {
        throw DimensionMismatch("AffineFunction: W has " + std::to_string(W_.rows()) +
                                " rows but b has " + std::to_string(b_.size()) + " entries");
    }
}

Vector AffineFunction::operator()(const Vector& x) const {
    require_dim(input_dim(), static_cast<std::size_t>(x.size()), "AffineFunction");
    return W_ * x + b_;
}

LinearFunctional AffineFunction::row(std::size_t i) const {
    return LinearFunctional(W_.row(static_cast<Eigen::Index>(i)).transpose(),
                            b_(static_cast<Eigen::Index>(i)));
}

Polytope::Polytope(std::size_t dim, const std::vector<LinearFunctional>& constraints,
                   const Tolerances& tol)
    : dim_(dim) {
    source_index_.reserve(constraints.size());
    for (const auto& f : constraints) {
        require_dim(dim_, f.dim(), "Polytope constraint");
        std::size_t found = constraints_.size();
        for (std::size_t k = 0; k < constraints_.size(); ++k) {
            if (same_after_normalization(constraints_[k], f, tol)) {
                found = k;
                break;
            }
        }
        if (found == constraints_.size()) constraints_.push_back(f.normalized());
        source_index_.push_back(found);
    }
}

double Polytope::max_violation(const Vector& x) const {
    require_dim(dim_, static_cast<std::size_t>(x.size()), "Polytope::max_violation");
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& f : constraints_) worst = std::max(worst, f(x));
    return worst;
}

Polytope Polytope::subset(const std::vector<std::size_t>& indices) const {
    std::vector<LinearFunctional> picked;
    picked.reserve(indices.size());
    for (auto i : indices) picked.push_back(constraints_.at(i));
    return Polytope(dim_, picked);
}

Matrix Polytope::normals() const {
    Matrix A(static_cast<Eigen::Index>(constraints_.size()), static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        A.row(static_cast<Eigen::Index>(i)) = constraints_[i].w().transpose();
    }
    return A;
}

Vector Polytope::offsets() const {
    Vector c(static_cast<Eigen::Index>(constraints_.size()));
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        c(static_cast<Eigen::Index>(i)) = constraints_[i].c();
    }
    return c;
}

namespace {

LpSolution from_backend(const lp::Result& r, double constant, double sign) {
    LpSolution s;
    switch (r.status) {
        case lp::Status::Optimal:
            s.status = LpStatus::Optimal;
            s.objective = sign * r.objective + constant;
            s.argpoint = r.x;
            break;
        case lp::Status::Infeasible:
            s.status = LpStatus::Infeasible;
            break;
        case lp::Status::Unbounded:
            s.status = LpStatus::Unbounded;
            s.objective = sign * std::numeric_limits<double>::infinity();
            break;
    }
    return s;
}

}  // namespace

LpSolution solve_lp(const Vector& w, double c, const Polytope& p, Sense sense,
                    const Tolerances& tol) {
    require_dim(p.dim(), static_cast<std::size_t>(w.size()), "solve_lp objective");
    const double sign = sense == Sense::Maximize ? 1.0 : -1.0;
    const auto r = lp::maximize(p.normals(), -p.offsets(), sign * w, {tol.feasibility, 0});
    return from_backend(r, c, sign);
}

LpSolution solve_lp(const LinearFunctional& objective, const Polytope& p, Sense sense,
                    const Tolerances& tol) {
    return solve_lp(objective.w(), objective.c(), p, sense, tol);
}

std::optional<InteriorPoint> interior_point(const Polytope& p, const Tolerances& tol,
                                            double clearance_cap) {
    const auto n = static_cast<Eigen::Index>(p.dim());
    const auto m = static_cast<Eigen::Index>(p.size());
    // Variables (x, t): w_i·x + t <= -c_i and t <= cap; maximize t.
    Matrix A = Matrix::Zero(m + 1, n + 1);
    Vector b(m + 1);
    A.topLeftCorner(m, n) = p.normals();
    A.block(0, n, m, 1).setOnes();
    b.head(m) = -p.offsets();
    A(m, n) = 1.0;
    b(m) = clearance_cap;
    Vector objective = Vector::Zero(n + 1);
    objective(n) = 1.0;

    const auto r = lp::maximize(A, b, objective, {tol.feasibility, 0});
    if (r.status != lp::Status::Optimal) return std::nullopt;
    Vector x = r.x.head(n);
    // Re-measure rather than trusting the LP's t.
    const double clearance = p.empty_description() ? clearance_cap : -p.max_violation(x);
    if (clearance < tol.interior) return std::nullopt;
    return InteriorPoint{std::move(x), std::min(clearance, clearance_cap)};
}

std::vector<std::size_t> irredundant_constraints(const Polytope& p, const Tolerances& tol) {
    const auto m = static_cast<Eigen::Index>(p.size());
    const auto n = static_cast<Eigen::Index>(p.dim());
    const Matrix A = p.normals();
    const Vector b = -p.offsets();
    std::vector<std::size_t> kept;
    Matrix relaxed_A(std::max<Eigen::Index>(m - 1, 0), n);
    Vector relaxed_b(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i < m; ++i) {
        if (i > 0) {
            relaxed_A.topRows(i) = A.topRows(i);
            relaxed_b.head(i) = b.head(i);
        }
        if (i + 1 < m) {
            relaxed_A.bottomRows(m - 1 - i) = A.bottomRows(m - 1 - i);
            relaxed_b.tail(m - 1 - i) = b.tail(m - 1 - i);
        }
        const auto r = lp::maximize(relaxed_A, relaxed_b, A.row(i).transpose(),
                                    {tol.feasibility, 0});
        if (r.status == lp::Status::Infeasible) {
            throw DegenerateInput("minimal_h_representation: relaxed polytope is empty");
        }
        if (r.status == lp::Status::Unbounded || r.objective - b(i) > tol.feasibility) {
            kept.push_back(static_cast<std::size_t>(i));
        }
    }
    return kept;
}

std::vector<std::size_t> minimal_h_representation(const Polytope& p, const Tolerances& tol) {
    if (!interior_point(p, tol)) {
        throw DegenerateInput("minimal_h_representation: polytope is empty or not full-dimensional");
    }
    return irredundant_constraints(p, tol);
}

}  // namespace polyverify
