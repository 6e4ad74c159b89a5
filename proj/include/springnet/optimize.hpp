#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "springnet/plasticity.hpp"
#include "springnet/simplex.hpp"
#include "springnet/spring_set.hpp"

namespace springnet {

using Functional = std::function<double(const SpringSet&)>;

/// coeff . c <= bound
struct LinearConstraint {
    std::array<double, kSpringCount> coeff{};
    double bound = 0.0;
};

struct Violation {
    double total = 0.0;
    double max = 0.0;
};

/// Objective plus constraints over the five elastic limits.
///
/// Beyond the explicit constraints, a set `domain` adds its four feasibility
/// slacks, and `require_connected` counts a disconnected network (R = +inf)
/// as a unit violation. `tie_break_weight` w adds w*|c|^2 to the minimized
/// merit so that flat optimal faces resolve to their least-norm point; the
/// reported value is always the raw objective.
struct OptProblem {
    Functional objective;
    Sense sense = Sense::Maximize;
    std::array<double, kSpringCount> lower{0, 0, 0, 0, 0};
    std::array<double, kSpringCount> upper{2, 2, 2, 2, 2};
    std::vector<LinearConstraint> linear_constraints;
    std::vector<Functional> nonlinear_constraints;  // slack >= 0 is feasible
    std::optional<PlasticDomain> domain;
    bool require_connected = true;
    double tie_break_weight = 0.0;

    /// Throws std::invalid_argument on a missing objective or bad bounds.
    void validate() const;

    double objective_value(const SpringSet& c) const;
    /// Quantity minimized by the optimizers (sign-adjusted objective plus
    /// tie-break term). Non-finite objectives map to +inf.
    double merit(const SpringSet& c) const;
    Violation violation(const SpringSet& c) const;
    SpringSet clip(SpringSet c) const;
};

enum class Method { DE, RandomSearch, LP };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view text);

struct OptResult {
    SpringSet c_star;
    double value = 0.0;
    double merit = 0.0;
    double F = 0.0;
    double R = 0.0;
    double G = 0.0;
    double C = 0.0;
    bool feasible = false;
    double max_violation = 0.0;
    double total_violation = 0.0;
    Method method = Method::DE;
    std::uint64_t seed = 0;
    int iterations = 0;
};

/// Scores `c` under `p` and packages it as a result. F uses the problem's
/// domain, or D135 when none is set.
OptResult make_result(const OptProblem& p, const SpringSet& c, Method method, std::uint64_t seed,
                      int iterations, double tol);

struct DEConfig {
    int population = 50;  // 10n
    double mutation = 0.7;
    double crossover = 0.9;
    int max_generations = 2000;
    double convergence_tol = 1e-6;
    int stagnation_window = 200;
    double constraint_tol = 1e-8;

    void validate() const;
};

struct RandomSearchConfig {
    double initial_step = 0.25;  // fraction of each box width
    double step_tol = 1e-8;
    double al_penalty = 10.0;  // initial augmented Lagrangian weight
    double al_margin = 1e-7;   // nonlinear constraints are targeted at >= margin
    int max_outer = 20;
    int max_evals_per_start = 20000;
    double constraint_tol = 1e-8;
};

/// Point score used by the feasibility rules.
struct Fitness {
    double merit = 0.0;
    double total_violation = 0.0;
    double max_violation = 0.0;
};

/// Deb's feasibility rules: feasible beats infeasible, lower total violation
/// wins between infeasible points, lower merit wins between feasible ones.
/// A point is feasible when its max violation is <= tol. Strict order.
bool deb_better(const Fitness& a, const Fitness& b, double tol);

/// DE/rand/1/bin with box clipping and Deb selection. Deterministic in
/// (p, cfg, seed). Stops at max_generations or once the best feasible
/// merit has improved by less than convergence_tol over stagnation_window
/// generations.
OptResult differential_evolution(const OptProblem& p, const DEConfig& cfg, std::uint64_t seed);

/// Best of `n_starts` local searches. Even starts are uniform draws moved to
/// the nearest point of the linear constraint polytope, odd starts are
/// polytope vertices chosen by random LP objectives. The local method is a
/// pattern search that keeps every linear constraint satisfied: it polls
/// generators of the cone of nearly active constraints, the coordinate
/// directions and a randomly rotated basis, halving the step on failure.
/// Nonlinear constraints enter through an augmented Lagrangian whose
/// multipliers are updated between searches of decreasing step tolerance.
OptResult random_search(const OptProblem& p, int n_starts, std::uint64_t seed,
                        const RandomSearchConfig& cfg = {});

/// Local refinement from `start`, moved onto the linear polytope first if it
/// lies outside. A start that meets the nonlinear constraints is searched
/// under an extreme barrier so the result stays feasible; otherwise this is
/// one random_search local run. Reported as Method::RandomSearch.
OptResult polish(const OptProblem& p, const SpringSet& start, std::uint64_t seed,
                 const RandomSearchConfig& cfg = {});

/// Deb-rule best; ties go to the lower seed, then to the earlier entry.
/// Throws std::invalid_argument on an empty list.
OptResult best_of(std::span<const OptResult> results, double tol = 1e-8);

}  // namespace springnet
