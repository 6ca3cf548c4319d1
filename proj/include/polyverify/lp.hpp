#pragma once

// Dense two-phase simplex over free variables. This is the single LP seam used
// by the geometry layer; everything above it talks to geometry::solve_lp.

#include <Eigen/Dense>

#include <cstddef>

namespace polyverify::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Options {
    double feasibility = 1e-9;
    // 0 selects a budget proportional to the tableau size.
    std::size_t max_pivots = 0;
};

struct Result {
    Status status = Status::Infeasible;
    double objective = 0.0;
    Eigen::VectorXd x;  // meaningful only when status == Optimal
};

/// Maximize c·x subject to A x <= b with x unrestricted in sign.
/// Throws LpIterationLimit when the pivot budget runs out.
Result maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                const Options& options = {});

}  // namespace polyverify::lp
