#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "springnet/circuit.hpp"
#include "springnet/optimize.hpp"
#include "springnet/sweep.hpp"

using namespace springnet;

namespace {

OptProblem sphere(double centre) {
    OptProblem p;
    p.sense = Sense::Minimize;
    p.require_connected = false;
    p.objective = [centre](const SpringSet& c) {
        double s = 0.0;
        for (double v : c.c) s += (v - centre) * (v - centre);
        return s;
    };
    return p;
}

// min cost s.t. c1 c2 >= 1 on [0,4]^5; optimum c = (1,1,0,0,0).
OptProblem hyperbola() {
    OptProblem p;
    p.sense = Sense::Minimize;
    p.require_connected = false;
    p.upper.fill(4.0);
    p.objective = [](const SpringSet& c) { return c.cost(); };
    p.nonlinear_constraints.push_back([](const SpringSet& c) { return c[0] * c[1] - 1.0; });
    return p;
}

}  // namespace

TEST_CASE("Deb feasibility rules") {
    const Fitness feasible_bad{5.0, 0.0, 0.0};
    const Fitness feasible_good{1.0, 0.0, 0.0};
    const Fitness infeasible_small{-10.0, 0.1, 0.1};
    const Fitness infeasible_large{-20.0, 0.5, 0.3};
    CHECK(deb_better(feasible_bad, infeasible_small, 1e-8));
    CHECK_FALSE(deb_better(infeasible_small, feasible_bad, 1e-8));
    CHECK(deb_better(feasible_good, feasible_bad, 1e-8));
    CHECK(deb_better(infeasible_small, infeasible_large, 1e-8));
    CHECK_FALSE(deb_better(feasible_good, feasible_good, 1e-8));
    // Within tolerance counts as feasible.
    CHECK(deb_better({0.0, 1e-10, 1e-10}, {1.0, 0.0, 0.0}, 1e-8));
}

TEST_CASE("best_of follows Deb, then the lower seed") {
    OptResult a, b, c;
    a.feasible = b.feasible = true;
    a.merit = 1.0;
    a.seed = 9;
    b.merit = 1.0;
    b.seed = 3;
    c.feasible = false;
    c.merit = -5.0;
    c.total_violation = c.max_violation = 1.0;
    const std::vector<OptResult> all{a, b, c};
    CHECK(best_of(all).seed == 3);
    CHECK_THROWS_AS(best_of(std::vector<OptResult>{}), std::invalid_argument);
}

TEST_CASE("problem validation") {
    OptProblem p;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = sphere(0.5);
    p.upper[0] = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = sphere(0.5);
    p.lower[2] = -0.5;
    p.upper[2] = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = sphere(0.5);
    p.tie_break_weight = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    DEConfig cfg;
    cfg.population = 3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.mutation = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.crossover = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(random_search(sphere(0.5), 0, 1), std::invalid_argument);
}

TEST_CASE("violations count domain slacks and disconnection") {
    OptProblem p = sphere(0.5);
    p.domain = PlasticDomain::D135;
    p.require_connected = true;
    const Violation ok = p.violation({{0.5, 0.5, 0, 0.5, 0.5}});
    CHECK(ok.max == doctest::Approx(0.0));
    // c2 < c3 + c5 breaks D135.
    const Violation bad = p.violation({{0.5, 0.1, 0.2, 1.0, 0.3}});
    CHECK(bad.max == doctest::Approx(0.4));
    const Violation cut = p.violation({{0, 0, 1, 1, 1}});
    CHECK(cut.max >= 1.0);
}

TEST_CASE("differential evolution finds a box-interior minimum") {
    const OptResult r = differential_evolution(sphere(0.3), {}, 5);
    CHECK(r.feasible);
    for (double v : r.c_star.c) CHECK(v == doctest::Approx(0.3).epsilon(1e-3));
    CHECK(r.method == Method::DE);
    CHECK(r.seed == 5);
}

TEST_CASE("differential evolution respects the box") {
    const OptResult r = differential_evolution(sphere(3.0), {}, 6);
    for (double v : r.c_star.c) CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("optimizers are deterministic in the seed") {
    const OptProblem p = make_problem(StudyId::A, 0.4, 0.3, PlasticDomain::D135);
    const OptResult a = differential_evolution(p, {}, 77);
    const OptResult b = differential_evolution(p, {}, 77);
    CHECK(a.c_star == b.c_star);
    CHECK(a.iterations == b.iterations);
    const OptResult c = random_search(p, 4, 78);
    const OptResult d = random_search(p, 4, 78);
    CHECK(c.c_star == d.c_star);
}

TEST_CASE("random search handles a curved constraint") {
    const OptResult r = random_search(hyperbola(), 8, 9);
    CHECK(r.feasible);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(r.c_star[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.c_star[1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("random search keeps linear constraints satisfied") {
    OptProblem p = sphere(2.0);
    p.linear_constraints.push_back({{1, 1, 1, 1, 1}, 1.0});
    const OptResult r = random_search(p, 6, 10);
    CHECK(r.feasible);
    CHECK(r.C <= 1.0 + 1e-12);
    for (double v : r.c_star.c) CHECK(v == doctest::Approx(0.2).epsilon(1e-4));
}

TEST_CASE("polish stays feasible from a feasible start") {
    // Two-spring series path; the cheapest feasible point has c2 = c5 with
    // 0.12 c + 0.2 / c = 0.5.
    const OptProblem p = make_problem(StudyId::C, 0.12, 0.1, PlasticDomain::D135);
    const OptResult r = polish(p, {{0, 4, 0, 0, 4}}, 1);
    const double c = (0.5 + std::sqrt(0.25 - 0.096)) / 0.24;
    CHECK(r.feasible);
    CHECK(r.C == doctest::Approx(2 * c).epsilon(1e-6));
    CHECK(r.c_star[1] == doctest::Approx(c).epsilon(1e-6));

    // Outside the polytope: projected first.
    const OptResult q = polish(hyperbola(), {{5, 5, 5, 5, 5}}, 2);
    CHECK(q.feasible);
    CHECK(q.C == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("study instances reach the known optima") {
    SweepConfig cfg;
    SUBCASE("study B") {
        const OptResult r = solve_instance(StudyId::B, 0.5, 0.5, PlasticDomain::D135, cfg, 1);
        CHECK(max_abs_diff(r.c_star, {{0.5, 0.5, 0, 0.5, 0.5}}) < 1e-3);
        CHECK(r.G == doctest::Approx(0.5).epsilon(1e-4));
    }
    SUBCASE("study A, strength weighted") {
        const OptResult r = solve_instance(StudyId::A, 1.0, 0.1, PlasticDomain::D234, cfg, 2);
        CHECK(r.F == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(r.R == doctest::Approx(2.0).epsilon(1e-4));
    }
    SUBCASE("study A, resistance weighted") {
        const OptResult r = solve_instance(StudyId::A, 0.1, 1.0, PlasticDomain::D135, cfg, 3);
        CHECK(r.F == doctest::Approx(0.75).epsilon(1e-4));
        CHECK(r.R == doctest::Approx(10.0 / 3.0).epsilon(1e-4));
    }
    SUBCASE("study C") {
        const OptResult r = solve_instance(StudyId::C, 0.3, 0.1, PlasticDomain::D135, cfg, 4);
        CHECK(r.feasible);
        CHECK(r.C == doctest::Approx(1.588235).epsilon(1e-4));
    }
    SUBCASE("study D above the threshold") {
        const OptResult r = solve_instance(StudyId::D, 1.0, 1.0, PlasticDomain::D135, cfg, 5);
        CHECK(r.C == doctest::Approx(1.5).epsilon(1e-4));
    }
}

TEST_CASE("make_result scores a point") {
    const OptProblem p = make_problem(StudyId::A, 1.0, 0.0, PlasticDomain::D135);
    const OptResult r = make_result(p, {{0.5, 0.5, 0, 0.5, 0.5}}, Method::LP, 0, 0, 1e-9);
    CHECK(r.feasible);
    CHECK(r.value == doctest::Approx(1.0));
    const OptResult bad = make_result(p, {{1, 1, 1, 1, 1}}, Method::LP, 0, 0, 1e-9);
    CHECK_FALSE(bad.feasible);
    CHECK(bad.max_violation > 0.0);
}

TEST_CASE("method names") {
    CHECK(parse_method("de") == Method::DE);
    CHECK_FALSE(parse_method("sa").has_value());
    CHECK(to_string(Method::LP) == "lp");
}
