#include "springnet/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace springnet {

namespace {

constexpr double kPivotEps = 1e-12;

class Tableau {
public:
    Tableau(const StandardFormLp& lp) : m_(lp.b.size()), n_(lp.cost.size()) {
        // Columns: n original, m artificial, 1 right-hand side.
        width_ = n_ + m_ + 1;
        t_.assign((m_ + 1) * width_, 0.0);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * lp.a[i][j];
            at(i, n_ + i) = 1.0;
            at(i, rhs()) = sign * lp.b[i];
            basis_[i] = n_ + i;
        }
        active_.assign(m_, true);
    }

    double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
    std::size_t rhs() const { return width_ - 1; }
    std::size_t obj_row() const { return m_; }

    void set_phase_one_objective() {
        for (std::size_t j = 0; j < width_; ++j) at(obj_row(), j) = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_[i]) continue;
            for (std::size_t j = 0; j < n_; ++j) at(obj_row(), j) -= at(i, j);
            at(obj_row(), rhs()) -= at(i, rhs());
        }
    }

    void set_phase_two_objective(const std::vector<double>& cost) {
        for (std::size_t j = 0; j < width_; ++j) at(obj_row(), j) = 0.0;
        for (std::size_t j = 0; j < n_; ++j) at(obj_row(), j) = cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_[i]) continue;
            const std::size_t bvar = basis_[i];
            const double cb = bvar < n_ ? cost[bvar] : 0.0;
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) {
                if (j >= n_ && j < n_ + m_) continue;
                at(obj_row(), j) -= cb * at(i, j);
            }
        }
    }

    // Returns false when unbounded.
    bool optimize(std::size_t allowed_columns) {
        const std::size_t limit = 1000 * (m_ + n_ + 1);
        for (std::size_t iter = 0; iter < limit; ++iter) {
            std::size_t enter = allowed_columns;
            for (std::size_t j = 0; j < allowed_columns; ++j) {
                if (at(obj_row(), j) < -kPivotEps) {
                    enter = j;
                    break;
                }
            }
            if (enter == allowed_columns) return true;

            std::size_t leave = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (!active_[i] || at(i, enter) <= kPivotEps) continue;
                const double ratio = at(i, rhs()) / at(i, enter);
                if (leave == m_ || ratio < best_ratio - kPivotEps ||
                    (std::abs(ratio - best_ratio) <= kPivotEps && basis_[i] < basis_[leave])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex iteration limit exceeded");
    }

    void pivot(std::size_t r, std::size_t c) {
        const double p = at(r, c);
        for (std::size_t j = 0; j < width_; ++j) at(r, j) /= p;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r || (i < m_ && !active_[i])) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        basis_[r] = c;
    }

    // Pivots remaining artificials out of the basis; rows that cannot be
    // pivoted are linearly dependent and get dropped.
    void expel_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_[i] || basis_[i] < n_) continue;
            std::size_t col = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(at(i, j)) > kPivotEps) {
                    col = j;
                    break;
                }
            }
            if (col == n_) {
                active_[i] = false;
            } else {
                pivot(i, col);
            }
        }
    }

    std::vector<double> solution() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (active_[i] && basis_[i] < n_) x[basis_[i]] = at(i, rhs());
        }
        return x;
    }

    double objective_value() const { return -at(obj_row(), rhs()); }
    std::size_t columns() const { return n_; }
    std::size_t columns_with_artificials() const { return n_ + m_; }

private:
    std::size_t m_;
    std::size_t n_;
    std::size_t width_ = 0;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
    std::vector<bool> active_;
};

}  // namespace

LpSolution solve_standard_form(const StandardFormLp& lp, double feasibility_tol) {
    const std::size_t n = lp.cost.size();
    if (lp.a.size() != lp.b.size()) throw std::invalid_argument("row count mismatch");
    for (const auto& row : lp.a) {
        if (row.size() != n) throw std::invalid_argument("row length mismatch");
    }

    Tableau tab(lp);
    tab.set_phase_one_objective();
    tab.optimize(tab.columns_with_artificials());

    LpSolution out;
    if (tab.objective_value() > feasibility_tol) {
        out.status = LpStatus::Infeasible;
        return out;
    }
    tab.expel_artificials();
    tab.set_phase_two_objective(lp.cost);
    if (!tab.optimize(tab.columns())) {
        out.status = LpStatus::Unbounded;
        return out;
    }
    out.status = LpStatus::Optimal;
    out.vertex = tab.solution();
    out.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.value += lp.cost[j] * out.vertex[j];
    return out;
}

LpSolution simplex_lp(std::span<const double> objective, std::span<const LpConstraint> constraints,
                      Sense sense) {
    const std::size_t n = objective.size();
    const std::size_t m = constraints.size();
    StandardFormLp lp;
    lp.cost.assign(n + m, 0.0);
    const double sign = sense == Sense::Maximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) lp.cost[j] = sign * objective[j];
    lp.a.assign(m, std::vector<double>(n + m, 0.0));
    lp.b.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (constraints[i].row.size() != n) {
            throw std::invalid_argument("constraint row length differs from objective");
        }
        for (std::size_t j = 0; j < n; ++j) lp.a[i][j] = constraints[i].row[j];
        lp.a[i][n + i] = 1.0;
        lp.b[i] = constraints[i].bound;
    }

    LpSolution sol = solve_standard_form(lp);
    if (sol.status != LpStatus::Optimal) return sol;
    sol.vertex.resize(n);
    sol.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.value += objective[j] * sol.vertex[j];
    return sol;
}

}  // namespace springnet
