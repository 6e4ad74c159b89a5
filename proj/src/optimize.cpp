#include "springnet/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "springnet/circuit.hpp"
#include "springnet/rng.hpp"
#include "springnet/simplex.hpp"

namespace springnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kDim = kSpringCount;

Fitness assess(const OptProblem& p, const SpringSet& c) {
    const Violation v = p.violation(c);
    return {p.merit(c), v.total, v.max};
}

SpringSet uniform_point(const OptProblem& p, Rng& rng) {
    SpringSet x;
    for (std::size_t j = 0; j < kDim; ++j) x[j] = rng.uniform(p.lower[j], p.upper[j]);
    return x;
}

}  // namespace

void OptProblem::validate() const {
    if (!objective) throw std::invalid_argument("optimization problem has no objective");
    for (std::size_t j = 0; j < kDim; ++j) {
        if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || lower[j] > upper[j]) {
            throw std::invalid_argument("box bounds must be finite with lower <= upper");
        }
        if (lower[j] < 0.0) throw std::invalid_argument("elastic limits cannot go below zero");
    }
    if (!(tie_break_weight >= 0.0)) throw std::invalid_argument("tie_break_weight must be >= 0");
}

double OptProblem::objective_value(const SpringSet& c) const { return objective(c); }

double OptProblem::merit(const SpringSet& c) const {
    const double v = objective(c);
    if (!std::isfinite(v)) return kInf;
    double m = sense == Sense::Maximize ? -v : v;
    if (tie_break_weight > 0.0) {
        double norm2 = 0.0;
        for (double x : c.c) norm2 += x * x;
        m += tie_break_weight * norm2;
    }
    return m;
}

Violation OptProblem::violation(const SpringSet& c) const {
    Violation v;
    auto add = [&v](double amount) {
        if (!(amount <= 0.0)) {
            const double a = std::isnan(amount) ? kInf : amount;
            v.total += a;
            v.max = std::max(v.max, a);
        }
    };
    for (const LinearConstraint& lc : linear_constraints) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < kDim; ++j) lhs += lc.coeff[j] * c[j];
        add(lhs - lc.bound);
    }
    for (const Functional& g : nonlinear_constraints) add(-g(c));
    if (domain) {
        for (double s : feasibility(c, *domain, 0.0).slacks) add(-s);
    }
    if (require_connected && std::isinf(resistance(c))) add(1.0);
    return v;
}

SpringSet OptProblem::clip(SpringSet c) const {
    for (std::size_t j = 0; j < kDim; ++j) c[j] = std::clamp(c[j], lower[j], upper[j]);
    return c;
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::DE: return "de";
        case Method::RandomSearch: return "rs";
        case Method::LP: return "lp";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view text) {
    if (text == "de") return Method::DE;
    if (text == "rs") return Method::RandomSearch;
    if (text == "lp") return Method::LP;
    return std::nullopt;
}

OptResult make_result(const OptProblem& p, const SpringSet& c, Method method, std::uint64_t seed,
                      int iterations, double tol) {
    OptResult r;
    r.c_star = c;
    r.value = p.objective_value(c);
    r.merit = p.merit(c);
    r.F = terminal_force(c, p.domain.value_or(PlasticDomain::D135));
    r.R = resistance(c);
    r.G = conductance(c);
    r.C = c.cost();
    const Violation v = p.violation(c);
    r.max_violation = v.max;
    r.total_violation = v.total;
    r.feasible = v.max <= tol;
    r.method = method;
    r.seed = seed;
    r.iterations = iterations;
    return r;
}

void DEConfig::validate() const {
    if (population < 4) throw std::invalid_argument("DE population must be >= 4");
    if (!(mutation > 0.0 && mutation < 2.0)) throw std::invalid_argument("DE mutation factor must lie in (0,2)");
    if (!(crossover >= 0.0 && crossover <= 1.0)) throw std::invalid_argument("DE crossover rate must lie in [0,1]");
    if (max_generations < 1) throw std::invalid_argument("DE needs at least one generation");
    if (stagnation_window < 1) throw std::invalid_argument("stagnation window must be positive");
}

bool deb_better(const Fitness& a, const Fitness& b, double tol) {
    const bool fa = a.max_violation <= tol;
    const bool fb = b.max_violation <= tol;
    if (fa != fb) return fa;
    if (!fa) return a.total_violation < b.total_violation;
    return a.merit < b.merit;
}

OptResult differential_evolution(const OptProblem& p, const DEConfig& cfg, std::uint64_t seed) {
    p.validate();
    cfg.validate();
    Rng rng(seed);
    const auto np = static_cast<std::size_t>(cfg.population);
    const double tol = cfg.constraint_tol;

    std::vector<SpringSet> pop(np);
    std::vector<Fitness> fit(np);
    for (std::size_t i = 0; i < np; ++i) {
        pop[i] = uniform_point(p, rng);
        fit[i] = assess(p, pop[i]);
    }
    auto best_index = [&] {
        std::size_t b = 0;
        for (std::size_t i = 1; i < np; ++i) {
            if (deb_better(fit[i], fit[b], tol)) b = i;
        }
        return b;
    };

    std::size_t best = best_index();
    double reference = kInf;
    int quiet = 0;
    int generation = 0;
    std::vector<SpringSet> next(np);
    std::vector<Fitness> next_fit(np);
    while (generation < cfg.max_generations) {
        ++generation;
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r1, r2, r3;
            do r1 = rng.index(np); while (r1 == i);
            do r2 = rng.index(np); while (r2 == i || r2 == r1);
            do r3 = rng.index(np); while (r3 == i || r3 == r1 || r3 == r2);
            const std::size_t jrand = rng.index(kDim);

            SpringSet trial = pop[i];
            for (std::size_t j = 0; j < kDim; ++j) {
                if (rng.uniform() < cfg.crossover || j == jrand) {
                    trial[j] = pop[r1][j] + cfg.mutation * (pop[r2][j] - pop[r3][j]);
                }
            }
            trial = p.clip(trial);
            const Fitness ft = assess(p, trial);
            if (deb_better(fit[i], ft, tol)) {
                next[i] = pop[i];
                next_fit[i] = fit[i];
            } else {
                next[i] = trial;
                next_fit[i] = ft;
            }
        }
        pop.swap(next);
        fit.swap(next_fit);
        best = best_index();

        if (fit[best].max_violation <= tol) {
            if (fit[best].merit < reference - cfg.convergence_tol) {
                reference = fit[best].merit;
                quiet = 0;
            } else if (++quiet >= cfg.stagnation_window) {
                break;
            }
        }
    }
    return make_result(p, pop[best], Method::DE, seed, generation, tol);
}

namespace {

struct LocalOutcome {
    SpringSet x;
    int polls = 0;
};

// Orthonormal basis from the Householder reflection of a random direction.
std::array<SpringSet, kDim> rotated_basis(Rng& rng) {
    SpringSet v;
    double norm2 = 0.0;
    while (norm2 < 1e-12) {
        norm2 = 0.0;
        for (std::size_t j = 0; j < kDim; ++j) {
            v[j] = rng.normal();
            norm2 += v[j] * v[j];
        }
    }
    std::array<SpringSet, kDim> basis{};
    for (std::size_t k = 0; k < kDim; ++k) {
        for (std::size_t j = 0; j < kDim; ++j) {
            basis[k][j] = (j == k ? 1.0 : 0.0) - 2.0 * v[j] * v[k] / norm2;
        }
    }
    return basis;
}

// Every linear restriction of p written as row . c <= bound, box included.
std::vector<LinearConstraint> linear_rows(const OptProblem& p) {
    std::vector<LinearConstraint> rows = p.linear_constraints;
    if (p.domain) {
        for (const auto& r : feasibility_rows(*p.domain)) {
            LinearConstraint lc;
            for (std::size_t j = 0; j < kDim; ++j) lc.coeff[j] = -r[j];
            lc.bound = 0.0;
            rows.push_back(lc);
        }
    }
    for (std::size_t j = 0; j < kDim; ++j) {
        LinearConstraint lo, hi;
        lo.coeff[j] = -1.0;
        lo.bound = -p.lower[j];
        hi.coeff[j] = 1.0;
        hi.bound = p.upper[j];
        rows.push_back(lo);
        rows.push_back(hi);
    }
    return rows;
}

// Generators of the cone {d : a_i . d <= 0} over the constraints within
// distance h of x. Dependent rows are dropped, nearest first.
std::vector<SpringSet> conforming_directions(const std::vector<LinearConstraint>& rows,
                                             const SpringSet& x, double h) {
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double lhs = 0.0, norm2 = 0.0;
        for (std::size_t j = 0; j < kDim; ++j) {
            lhs += rows[i].coeff[j] * x[j];
            norm2 += rows[i].coeff[j] * rows[i].coeff[j];
        }
        if (norm2 == 0.0) continue;
        const double dist = (rows[i].bound - lhs) / std::sqrt(norm2);
        if (dist <= h) near.emplace_back(dist, i);
    }
    if (near.empty()) return {};
    std::sort(near.begin(), near.end());

    std::vector<Eigen::Matrix<double, kDim, 1>> kept;
    Eigen::Matrix<double, kDim, Eigen::Dynamic> q(kDim, 0);
    for (const auto& [dist, i] : near) {
        if (kept.size() == kDim) break;
        Eigen::Matrix<double, kDim, 1> a;
        for (std::size_t j = 0; j < kDim; ++j) a(j) = rows[i].coeff[j];
        a.normalize();
        Eigen::Matrix<double, kDim, 1> r = a;
        for (Eigen::Index k = 0; k < q.cols(); ++k) r -= q.col(k).dot(r) * q.col(k);
        if (r.norm() < 1e-8) continue;
        kept.push_back(a);
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = r.normalized();
    }

    const auto k = static_cast<Eigen::Index>(kept.size());
    Eigen::Matrix<double, Eigen::Dynamic, kDim> a(k, kDim);
    for (Eigen::Index i = 0; i < k; ++i) a.row(i) = kept[static_cast<std::size_t>(i)].transpose();
    const Eigen::MatrixXd pinv = a.transpose() * (a * a.transpose()).inverse();

    std::vector<SpringSet> out;
    auto push = [&out](const Eigen::VectorXd& v) {
        const double n = v.norm();
        if (n < 1e-12) return;
        SpringSet d;
        for (std::size_t j = 0; j < kDim; ++j) d[j] = v(static_cast<Eigen::Index>(j)) / n;
        out.push_back(d);
    };
    for (Eigen::Index i = 0; i < k; ++i) push(-pinv.col(i));
    if (k < static_cast<Eigen::Index>(kDim)) {
        // Orthogonal complement of the kept rows: eigenvalue-one eigenvectors
        // of the projector.
        const Eigen::Matrix<double, kDim, kDim> proj =
            Eigen::Matrix<double, kDim, kDim>::Identity() - q * q.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, kDim, kDim>> eig(proj);
        for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(kDim); ++c) {
            if (eig.eigenvalues()(c) < 0.5) continue;
            push(eig.eigenvectors().col(c));
            push(-eig.eigenvectors().col(c));
        }
    }
    return out;
}

double linear_excess(const std::vector<LinearConstraint>& rows, const SpringSet& x) {
    double worst = -kInf;
    for (const LinearConstraint& lc : rows) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < kDim; ++j) lhs += lc.coeff[j] * x[j];
        worst = std::max(worst, lhs - lc.bound);
    }
    return worst;
}

constexpr double kLinearSlop = 1e-12;

// Nearest point of the linear polytope in the L1 sense, by LP.
std::optional<SpringSet> project(const OptProblem& p, const std::vector<LinearConstraint>& rows,
                                 const SpringSet& x0) {
    std::vector<LpConstraint> lp;
    for (std::size_t j = 0; j < kDim; ++j) {
        std::vector<double> up(2 * kDim, 0.0), down(2 * kDim, 0.0);
        up[j] = 1.0;
        up[kDim + j] = -1.0;
        down[j] = -1.0;
        down[kDim + j] = -1.0;
        lp.push_back({up, x0[j]});
        lp.push_back({down, -x0[j]});
    }
    for (const LinearConstraint& lc : rows) {
        std::vector<double> r(2 * kDim, 0.0);
        std::copy(lc.coeff.begin(), lc.coeff.end(), r.begin());
        lp.push_back({r, lc.bound});
    }
    std::vector<double> cost(2 * kDim, 0.0);
    std::fill(cost.begin() + kDim, cost.end(), 1.0);
    const LpSolution sol = simplex_lp(cost, lp, Sense::Minimize);
    if (sol.status != LpStatus::Optimal) return std::nullopt;
    SpringSet x;
    for (std::size_t j = 0; j < kDim; ++j) x[j] = sol.vertex[j];
    x = p.clip(x);
    if (linear_excess(rows, x) > 1e-9) return std::nullopt;
    return x;
}

// Augmented Lagrangian of the nonlinear constraints, shifted inward by
// `margin`; disconnection is a barrier.
struct Lagrangian {
    const OptProblem* p = nullptr;
    std::vector<double> lambda;
    double mu = 10.0;
    double margin = 0.0;
    // Extreme barrier instead: points with a constraint below -barrier_tol
    // score +inf.
    bool barrier = false;
    double barrier_tol = 0.0;

    std::vector<double> shifted(const SpringSet& c) const {
        std::vector<double> v;
        v.reserve(p->nonlinear_constraints.size());
        for (const Functional& g : p->nonlinear_constraints) {
            const double x = g(c);
            v.push_back(std::isnan(x) ? -kInf : x - margin);
        }
        return v;
    }

    double operator()(const SpringSet& c) const {
        double m = p->merit(c);
        if (!std::isfinite(m)) return kInf;
        if (p->require_connected && std::isinf(resistance(c))) return kInf;
        if (barrier) {
            for (const Functional& g : p->nonlinear_constraints) {
                if (!(g(c) >= -barrier_tol)) return kInf;
            }
            return m;
        }
        const std::vector<double> v = shifted(c);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!std::isfinite(v[i])) return kInf;
            const double t = std::max(0.0, lambda[i] - mu * v[i]);
            m += (t * t - lambda[i] * lambda[i]) / (2.0 * mu);
        }
        return m;
    }
};

struct Search {
    const OptProblem& p;
    const std::vector<LinearConstraint>& rows;
    Rng& rng;
    SpringSet width;
    double scale = 0.0;
    int evals = 0;
    int polls = 0;

    // Generating set search on f, holding every linear restriction.
    void run(const Lagrangian& f, SpringSet& x, double h0, double htol, int budget) {
        double fx = f(x);
        ++evals;
        double step = h0;
        std::vector<SpringSet> dirs;
        while (step > htol && evals < budget) {
            ++polls;
            dirs = conforming_directions(rows, x, step * scale);
            for (std::size_t j = 0; j < kDim; ++j) {
                SpringSet e{};
                e[j] = 1.0;
                dirs.push_back(e);
                e[j] = -1.0;
                dirs.push_back(e);
            }
            for (const SpringSet& h : rotated_basis(rng)) {
                SpringSet neg;
                for (std::size_t j = 0; j < kDim; ++j) neg[j] = -h[j];
                dirs.push_back(h);
                dirs.push_back(neg);
            }
            bool improved = false;
            for (const SpringSet& d : dirs) {
                SpringSet y;
                for (std::size_t j = 0; j < kDim; ++j) y[j] = x[j] + step * width[j] * d[j];
                if (linear_excess(rows, y) > kLinearSlop) continue;
                y = p.clip(y);
                if (y == x) continue;
                const double fy = f(y);
                ++evals;
                if (fy < fx) {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
            step = improved ? std::min(2.0 * step, h0) : 0.5 * step;
        }
    }
};

LocalOutcome local_search(const OptProblem& p, const std::vector<LinearConstraint>& rows, SpringSet x,
                          Rng& rng, const RandomSearchConfig& cfg) {
    Search search{p, rows, rng, {}, 0.0};
    for (std::size_t j = 0; j < kDim; ++j) search.width[j] = p.upper[j] - p.lower[j];
    search.scale = *std::max_element(search.width.c.begin(), search.width.c.end());

    Lagrangian f;
    f.p = &p;
    f.lambda.assign(p.nonlinear_constraints.size(), 0.0);
    f.mu = cfg.al_penalty;
    f.margin = cfg.al_margin;
    if (p.nonlinear_constraints.empty()) {
        search.run(f, x, cfg.initial_step, cfg.step_tol, cfg.max_evals_per_start);
        return {x, search.polls};
    }

    double previous = kInf;
    double htol = 1e-2;
    for (int outer = 0; outer < cfg.max_outer && search.evals < cfg.max_evals_per_start; ++outer) {
        const double h0 = outer == 0 ? cfg.initial_step : std::min(cfg.initial_step, 1e3 * htol);
        search.run(f, x, h0, htol, cfg.max_evals_per_start);
        const std::vector<double> v = f.shifted(x);
        double gap = 0.0;
        for (double vi : v) gap = std::max(gap, std::isfinite(vi) ? -vi : kInf);
        const bool finest = htol <= cfg.step_tol;
        if (finest && gap <= 0.5 * cfg.al_margin) break;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (std::isfinite(v[i])) f.lambda[i] = std::max(0.0, f.lambda[i] - f.mu * v[i]);
        }
        if (gap > 0.25 * previous) f.mu = std::min(10.0 * f.mu, 1e10);
        previous = gap;
        htol = finest || 0.1 * htol < cfg.step_tol * 1.5 ? cfg.step_tol : 0.1 * htol;
    }
    return {x, search.polls};
}

// Descent from a feasible point that never leaves the feasible set.
LocalOutcome barrier_search(const OptProblem& p, const std::vector<LinearConstraint>& rows, SpringSet x,
                            Rng& rng, const RandomSearchConfig& cfg) {
    Search search{p, rows, rng, {}, 0.0};
    for (std::size_t j = 0; j < kDim; ++j) search.width[j] = p.upper[j] - p.lower[j];
    search.scale = *std::max_element(search.width.c.begin(), search.width.c.end());
    Lagrangian f;
    f.p = &p;
    f.barrier = true;
    f.barrier_tol = cfg.constraint_tol;
    search.run(f, x, cfg.initial_step, cfg.step_tol, cfg.max_evals_per_start);
    return {x, search.polls};
}

}  // namespace

OptResult random_search(const OptProblem& p, int n_starts, std::uint64_t seed, const RandomSearchConfig& cfg) {
    p.validate();
    if (n_starts < 1) throw std::invalid_argument("random search needs at least one start");
    Rng rng(seed);
    const double tol = cfg.constraint_tol;
    const std::vector<LinearConstraint> rows = linear_rows(p);

    // Odd starts are vertices of the linear polytope picked by a random LP
    // objective; optima of these studies often sit on such vertices.
    std::vector<LpConstraint> polytope;
    for (const LinearConstraint& lc : rows) {
        polytope.push_back({std::vector<double>(lc.coeff.begin(), lc.coeff.end()), lc.bound});
    }
    auto vertex_start = [&]() -> std::optional<SpringSet> {
        std::array<double, kDim> w;
        for (double& x : w) x = rng.normal();
        const LpSolution sol = simplex_lp(w, polytope, Sense::Maximize);
        if (sol.status != LpStatus::Optimal) return std::nullopt;
        SpringSet v;
        for (std::size_t j = 0; j < kDim; ++j) v[j] = sol.vertex[j];
        v = p.clip(v);
        if (linear_excess(rows, v) > 1e-9) return std::nullopt;
        return v;
    };

    std::optional<SpringSet> best;
    Fitness best_fit;
    int polls = 0;
    for (int s = 0; s < n_starts; ++s) {
        std::optional<SpringSet> start;
        if (s % 2 == 1) {
            start = vertex_start();
        } else {
            start = project(p, rows, uniform_point(p, rng));
        }
        SpringSet x;
        if (start) {
            const LocalOutcome out = local_search(p, rows, *start, rng, cfg);
            x = out.x;
            polls += out.polls;
        } else {
            // Empty polytope: nothing to search, report the raw draw.
            x = uniform_point(p, rng);
        }
        const Fitness f = assess(p, x);
        if (!best || deb_better(f, best_fit, tol)) {
            best = x;
            best_fit = f;
        }
    }
    return make_result(p, *best, Method::RandomSearch, seed, polls, tol);
}

OptResult polish(const OptProblem& p, const SpringSet& start, std::uint64_t seed, const RandomSearchConfig& cfg) {
    p.validate();
    Rng rng(seed);
    const std::vector<LinearConstraint> rows = linear_rows(p);
    SpringSet x = p.clip(start);
    if (linear_excess(rows, x) > kLinearSlop) {
        const auto moved = project(p, rows, x);
        if (!moved) return make_result(p, x, Method::RandomSearch, seed, 0, cfg.constraint_tol);
        x = *moved;
    }
    const bool feasible = std::all_of(p.nonlinear_constraints.begin(), p.nonlinear_constraints.end(),
                                      [&](const Functional& g) { return g(x) >= -cfg.constraint_tol; });
    const LocalOutcome out =
        feasible ? barrier_search(p, rows, x, rng, cfg) : local_search(p, rows, x, rng, cfg);
    return make_result(p, out.x, Method::RandomSearch, seed, out.polls, cfg.constraint_tol);
}

OptResult best_of(std::span<const OptResult> results, double tol) {
    if (results.empty()) throw std::invalid_argument("best_of needs at least one result");
    auto fitness = [](const OptResult& r) {
        return Fitness{r.merit, r.total_violation, r.max_violation};
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const Fitness fi = fitness(results[i]);
        const Fitness fb = fitness(results[best]);
        if (deb_better(fi, fb, tol)) {
            best = i;
        } else if (!deb_better(fb, fi, tol) && results[i].seed < results[best].seed) {
            best = i;
        }
    }
    return results[best];
}

}  // namespace springnet
