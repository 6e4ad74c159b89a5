#pragma once

#include <span>
#include <vector>

namespace springnet {

enum class Sense { Maximize, Minimize };

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// row . x <= bound
struct LpConstraint {
    std::vector<double> row;
    double bound = 0.0;
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> vertex;
};

/// minimize cost . x  subject to  a x = b,  x >= 0
struct StandardFormLp {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<double> cost;
};

/// Dense two-phase tableau simplex with Bland's rule. `feasibility_tol` bounds
/// the phase-one residual accepted as feasible.
LpSolution solve_standard_form(const StandardFormLp& lp, double feasibility_tol = 1e-9);

/// Optimizes objective . x over { x >= 0 : row . x <= bound for each constraint }.
/// Throws std::invalid_argument when a row length differs from the objective.
LpSolution simplex_lp(std::span<const double> objective, std::span<const LpConstraint> constraints,
                      Sense sense);

}  // namespace springnet
