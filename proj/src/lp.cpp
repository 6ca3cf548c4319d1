#include "polyverify/lp.hpp"

#include "polyverify/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace polyverify::lp {
namespace {

constexpr double kPivotTol = 1e-10;
constexpr std::size_t kDegenerateStreakBeforeBland = 50;

// Tableau in canonical form. Columns: [x+ | x- | slack | artificial | rhs].
// The cost row holds reduced costs; its rhs entry is minus the objective value.
class Tableau {
public:
    Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
        : rows_(A.rows()), vars_(A.cols()) {
        const Eigen::Index m = rows_;
        const Eigen::Index n = vars_;
        std::vector<Eigen::Index> needs_artificial;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (b(i) < 0.0) needs_artificial.push_back(i);
        }
        artificial_begin_ = 2 * n + m;
        cols_ = artificial_begin_ + static_cast<Eigen::Index>(needs_artificial.size());
        t_ = Eigen::MatrixXd::Zero(m, cols_ + 1);
        basis_.assign(static_cast<std::size_t>(m), 0);
        alive_.assign(static_cast<std::size_t>(m), true);

        Eigen::Index next_art = artificial_begin_;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double sign = b(i) < 0.0 ? -1.0 : 1.0;
            t_.block(i, 0, 1, n) = sign * A.row(i);
            t_.block(i, n, 1, n) = -sign * A.row(i);
            t_(i, 2 * n + i) = sign;
            t_(i, cols_) = sign * b(i);
            if (sign < 0.0) {
                t_(i, next_art) = 1.0;
                basis_[static_cast<std::size_t>(i)] = next_art++;
            } else {
                basis_[static_cast<std::size_t>(i)] = 2 * n + i;
            }
        }
        cost_ = Eigen::RowVectorXd::Zero(cols_ + 1);
    }

    bool has_artificials() const { return cols_ > artificial_begin_; }

    void set_phase_one_costs() {
        cost_.setZero();
        for (Eigen::Index j = artificial_begin_; j < cols_; ++j) cost_(j) = -1.0;
        price_out();
    }

    void set_phase_two_costs(const Eigen::VectorXd& c) {
        cost_.setZero();
        cost_.head(vars_) = c.transpose();
        cost_.segment(vars_, vars_) = -c.transpose();
        price_out();
        allow_artificial_ = false;
    }

    double objective() const { return -cost_(cols_); }

    // Drive zero-level artificials out of the basis; rows where that is
    // impossible are linearly dependent and get retired.
    void purge_artificials() {
        for (Eigen::Index i = 0; i < rows_; ++i) {
            if (!alive_[static_cast<std::size_t>(i)]) continue;
            if (basis_[static_cast<std::size_t>(i)] < artificial_begin_) continue;
            Eigen::Index best = -1;
            double best_abs = kPivotTol;
            for (Eigen::Index j = 0; j < artificial_begin_; ++j) {
                if (std::abs(t_(i, j)) > best_abs) {
                    best_abs = std::abs(t_(i, j));
                    best = j;
                }
            }
            if (best >= 0) {
                pivot(i, best);
            } else {
                alive_[static_cast<std::size_t>(i)] = false;
            }
        }
    }

    enum class Outcome { Optimal, Unbounded };

    Outcome run(std::size_t& pivots_left) {
        bool bland = false;
        std::size_t degenerate_streak = 0;
        const double cost_scale = std::max(1.0, cost_.head(cols_).cwiseAbs().maxCoeff());
        const double rc_tol = 1e-11 * cost_scale;
        while (true) {
            const Eigen::Index entering = choose_entering(bland, rc_tol);
            if (entering < 0) return Outcome::Optimal;
            const Eigen::Index leaving = choose_leaving(entering, bland);
            if (leaving < 0) return Outcome::Unbounded;
            if (pivots_left == 0) {
                throw LpIterationLimit("simplex pivot budget exhausted (" +
                                       std::to_string(rows_) + " constraints, " +
                                       std::to_string(vars_) + " variables)");
            }
            --pivots_left;
            const bool degenerate = std::max(0.0, t_(leaving, cols_)) <= 1e-14;
            pivot(leaving, entering);
            if (degenerate) {
                if (++degenerate_streak > kDegenerateStreakBeforeBland) bland = true;
            } else {
                degenerate_streak = 0;
            }
        }
    }

    Eigen::VectorXd primal() const {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(vars_);
        for (Eigen::Index i = 0; i < rows_; ++i) {
            if (!alive_[static_cast<std::size_t>(i)]) continue;
            const Eigen::Index j = basis_[static_cast<std::size_t>(i)];
            const double v = t_(i, cols_);
            if (j < vars_) {
                x(j) += v;
            } else if (j < 2 * vars_) {
                x(j - vars_) -= v;
            }
        }
        return x;
    }

    Eigen::Index size() const { return rows_ + cols_; }

private:
    void price_out() {
        for (Eigen::Index i = 0; i < rows_; ++i) {
            if (!alive_[static_cast<std::size_t>(i)]) continue;
            const double cb = cost_(basis_[static_cast<std::size_t>(i)]);
            if (cb != 0.0) cost_ -= cb * t_.row(i);
        }
    }

    Eigen::Index choose_entering(bool bland, double rc_tol) const {
        const Eigen::Index limit = allow_artificial_ ? cols_ : artificial_begin_;
        Eigen::Index best = -1;
        double best_rc = rc_tol;
        for (Eigen::Index j = 0; j < limit; ++j) {
            if (cost_(j) > best_rc) {
                if (bland) return j;
                best_rc = cost_(j);
                best = j;
            }
        }
        return best;
    }

    Eigen::Index choose_leaving(Eigen::Index entering, bool bland) const {
        Eigen::Index best = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < rows_; ++i) {
            if (!alive_[static_cast<std::size_t>(i)]) continue;
            const double a = t_(i, entering);
            if (a <= kPivotTol) continue;
            const double ratio = std::max(0.0, t_(i, cols_)) / a;
            if (best < 0 || ratio < best_ratio - 1e-13) {
                best = i;
                best_ratio = ratio;
            } else if (ratio <= best_ratio + 1e-13) {
                const auto bi = basis_[static_cast<std::size_t>(i)];
                const auto bb = basis_[static_cast<std::size_t>(best)];
                const bool take = bland ? bi < bb : a > t_(best, entering);
                if (take) {
                    best = i;
                    best_ratio = std::min(best_ratio, ratio);
                }
            }
        }
        return best;
    }

    void pivot(Eigen::Index row, Eigen::Index col) {
        t_.row(row) /= t_(row, col);
        for (Eigen::Index i = 0; i < rows_; ++i) {
            if (i == row) continue;
            const double f = t_(i, col);
            if (f != 0.0) t_.row(i) -= f * t_.row(row);
        }
        const double fc = cost_(col);
        if (fc != 0.0) cost_ -= fc * t_.row(row);
        basis_[static_cast<std::size_t>(row)] = col;
    }

    Eigen::Index rows_;
    Eigen::Index vars_;
    Eigen::Index cols_ = 0;
    Eigen::Index artificial_begin_ = 0;
    bool allow_artificial_ = true;
    Eigen::MatrixXd t_;
    Eigen::RowVectorXd cost_;
    std::vector<Eigen::Index> basis_;
    std::vector<bool> alive_;
};

}  // namespace

Result maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                const Options& options) {
    if (A.rows() != b.size() || A.cols() != c.size()) {
        throw DimensionMismatch("lp::maximize: A is " + std::to_string(A.rows()) + "x" +
                                std::to_string(A.cols()) + ", b has " + std::to_string(b.size()) +
                                ", c has " + std::to_string(c.size()));
    }
    Tableau tableau(A, b);
    std::size_t pivots_left = options.max_pivots != 0
                                  ? options.max_pivots
                                  : static_cast<std::size_t>(50 * tableau.size() + 1000);

    Result result;
    if (tableau.has_artificials()) {
        tableau.set_phase_one_costs();
        tableau.run(pivots_left);
        if (-tableau.objective() > options.feasibility) {
            result.status = Status::Infeasible;
            return result;
        }
        tableau.purge_artificials();
    }
    tableau.set_phase_two_costs(c);
    if (tableau.run(pivots_left) == Tableau::Outcome::Unbounded) {
        result.status = Status::Unbounded;
        return result;
    }
    result.status = Status::Optimal;
    result.x = tableau.primal();
    result.objective = c.dot(result.x);
    return result;
}

}  // namespace polyverify::lp
