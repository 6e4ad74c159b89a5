#include <set>
#include <stdexcept>

#include "doctest.h"
#include "springnet/report.hpp"
#include "springnet/sweep.hpp"
#include "springnet/threshold.hpp"

using namespace springnet;

namespace {

SweepRow row_with(double k1, double k2, PlasticDomain d, double F, double R, double G, double C) {
    SweepRow row;
    row.k1 = k1;
    row.k2 = k2;
    row.domain = d;
    row.result.F = F;
    row.result.R = R;
    row.result.G = G;
    row.result.C = C;
    row.result.feasible = true;
    return row;
}

}  // namespace

TEST_CASE("grid axes") {
    const auto v = GridAxis{}.values();
    REQUIRE(v.size() == 10);
    CHECK(v.front() == 0.1);
    CHECK(v[2] == 0.3);
    CHECK(v.back() == 1.0);

    const StudySpec fine = StudySpec::fine(StudyId::C);
    CHECK(fine.k1.values().size() == 16);
    CHECK(fine.k2.values().size() == 6);
    CHECK(fine.k1.values()[6] == 0.22);

    const GridAxis g = GridAxis::parse("0.2:0.5:0.1");
    CHECK(g.values() == std::vector<double>{0.2, 0.3, 0.4, 0.5});
    CHECK(GridAxis::parse("1:1:1").values() == std::vector<double>{1.0});
    CHECK_THROWS_AS(GridAxis::parse("0.1:1.0"), std::invalid_argument);
    CHECK_THROWS_AS(GridAxis::parse("0.1:x:0.1"), std::invalid_argument);
    CHECK_THROWS_AS(GridAxis::parse("0.1:1.0:0"), std::invalid_argument);
    CHECK_THROWS_AS(GridAxis::parse("1.0:0.1:0.1"), std::invalid_argument);

    StudySpec none = StudySpec::standard(StudyId::A);
    none.domains.clear();
    CHECK_THROWS_AS(none.validate(), std::invalid_argument);
}

TEST_CASE("study names and objectives") {
    CHECK(parse_study("c") == StudyId::C);
    CHECK(parse_study("D") == StudyId::D);
    CHECK_FALSE(parse_study("e").has_value());
    const SpringSet u{{0.5, 0.5, 0, 0.5, 0.5}};
    CHECK(study_objective(StudyId::A, 0.3, 0.2, u, PlasticDomain::D135) == doctest::Approx(0.3 + 0.4));
    CHECK(study_objective(StudyId::B, 0.3, 0.2, u, PlasticDomain::D135) == doctest::Approx(0.3 + 0.1));
    CHECK(study_objective(StudyId::C, 0.3, 0.2, u, PlasticDomain::D135) == doctest::Approx(2.0));

    const OptProblem c = make_problem(StudyId::C, 0.3, 0.1, PlasticDomain::D135);
    CHECK(c.sense == Sense::Minimize);
    CHECK(c.upper[0] == kUncappedBound);
    CHECK(c.nonlinear_constraints.size() == 1);
    const OptProblem a = make_problem(StudyId::A, 0.3, 0.1, PlasticDomain::D234);
    CHECK(a.sense == Sense::Maximize);
    CHECK(a.linear_constraints.size() == 2);
    CHECK(a.violation({{0.75, 0, 0.5, 0.25, 0.5}}).max == doctest::Approx(0.0));
    // The end-to-end reversal of the D135 optimum stays in D135.
    CHECK(a.violation({{0.25, 0.5, 0.5, 0.75, 0}}).max == doctest::Approx(1.0));
}

TEST_CASE("cell seeds are distinct") {
    std::set<std::uint64_t> seen;
    for (std::size_t cell = 0; cell < 100; ++cell) {
        seen.insert(cell_seed(7, cell, PlasticDomain::D135));
        seen.insert(cell_seed(7, cell, PlasticDomain::D234));
    }
    CHECK(seen.size() == 200);
    CHECK(cell_seed(7, 3, PlasticDomain::D135) != cell_seed(8, 3, PlasticDomain::D135));
}

TEST_CASE("sweep output does not depend on the thread count") {
    StudySpec spec = StudySpec::standard(StudyId::A);
    spec.k1 = GridAxis::parse("0.2:0.8:0.3");
    spec.k2 = GridAxis::parse("0.1:0.4:0.3");
    SweepConfig cfg;
    cfg.rs_starts = 4;
    cfg.threads = 1;
    const std::string one = to_json(classify_cells(run_study(spec, cfg, 99)));
    cfg.threads = 3;
    const std::string three = to_json(classify_cells(run_study(spec, cfg, 99)));
    CHECK(one == three);
    cfg.threads = 1;
    const std::string other = to_json(classify_cells(run_study(spec, cfg, 100)));
    CHECK(other.size() > 0);
}

TEST_CASE("sweep row order and shape") {
    StudySpec spec = StudySpec::standard(StudyId::B);
    spec.k1 = GridAxis::parse("0.5:0.6:0.1");
    spec.k2 = GridAxis::parse("0.5:0.5:0.1");
    SweepConfig cfg;
    cfg.methods = MethodChoice::DE;
    const SweepReport r = run_study(spec, cfg, 1);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[0].domain == PlasticDomain::D135);
    CHECK(r.rows[1].domain == PlasticDomain::D234);
    CHECK(r.rows[2].k1 == 0.6);
    for (const SweepRow& row : r.rows) CHECK(row.result.method == Method::DE);

    SweepConfig bad;
    bad.de_runs = 0;
    CHECK_THROWS_AS(solve_instance(StudyId::B, 0.5, 0.5, PlasticDomain::D135, bad, 1), std::invalid_argument);
}

TEST_CASE("classification labels") {
    SweepReport a;
    a.study = StudyId::A;
    a.rows.push_back(row_with(0.1, 0.9, PlasticDomain::D135, 0.75, 10.0 / 3.0, 0.3, 2.0));
    a.rows.push_back(row_with(0.9, 0.1, PlasticDomain::D135, 1.0, 2.0, 0.5, 2.0));
    // On the tie line 0.25 k1 = (4/3) k2 with an unmatched signature.
    a.rows.push_back(row_with(0.8, 0.15, PlasticDomain::D135, 0.9, 2.5, 0.4, 2.0));
    a.rows.push_back(row_with(0.1, 0.1, PlasticDomain::D135, 0.9, 2.5, 0.4, 2.0));
    const SweepReport la = classify_cells(a);
    CHECK(la.rows[0].label == "red");
    CHECK(la.rows[1].label == "blue");
    CHECK(la.rows[2].label == "degenerate");
    CHECK(la.rows[3].label == "other");

    SweepReport c;
    c.study = StudyId::C;
    c.rows.push_back(row_with(0.4, 0.2, PlasticDomain::D135, 0.75, 3.3, 0.3, 1.5));
    c.rows.push_back(row_with(0.1, 0.1, PlasticDomain::D135, 2.0, 1.0, 1.0, 9.0));
    c.rows.push_back(row_with(0.1, 0.1, PlasticDomain::D135, 2.0, 1.0, 1.0, 9.0));
    c.rows.back().result.feasible = false;
    const SweepReport lc = classify_cells(c);
    CHECK(lc.rows[0].label == "base");
    CHECK(lc.rows[1].label == "raised");
    CHECK(lc.rows[2].label == "infeasible");
}

TEST_CASE("clusters group equal optima") {
    SweepReport r;
    r.study = StudyId::B;
    for (int i = 0; i < 3; ++i) r.rows.push_back(row_with(0.1 * (i + 1), 0.1, PlasticDomain::D135, 1, 2, 0.5, 2));
    r.rows[0].result.c_star = {{0.5, 0.5, 0, 0.5, 0.5}};
    r.rows[1].result.c_star = {{0.51, 0.5, 0, 0.5, 0.49}};
    r.rows[2].result.c_star = {{1, 0, 0, 1, 0}};
    const SweepReport l = classify_cells(r);
    CHECK(l.rows[0].cluster == 0);
    CHECK(l.rows[1].cluster == 0);
    CHECK(l.rows[2].cluster == 1);
}

TEST_CASE("group_cells keeps the better domain") {
    SweepReport r;
    r.study = StudyId::C;
    r.rows.push_back(row_with(0.2, 0.1, PlasticDomain::D135, 1, 1, 1, 2.0));
    r.rows.push_back(row_with(0.2, 0.1, PlasticDomain::D234, 1, 1, 1, 1.9));
    r.rows[0].result.merit = 2.0;
    r.rows[1].result.merit = 1.9;
    r.rows.push_back(row_with(0.3, 0.1, PlasticDomain::D135, 1, 1, 1, 1.5));
    r.rows.back().result.merit = 1.5;
    const auto cells = group_cells(classify_cells(r));
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].best_row == 1);
    CHECK(cells[0].rows.size() == 2);
    CHECK(cells[1].label == "base");
}

TEST_CASE("max-margin line between separable sets") {
    const std::vector<Point2> below{{0, 0}, {1, 0}, {2, 0}};
    const std::vector<Point2> above{{0, 2}, {1, 2}, {2, 2}};
    const ThresholdFit f = max_margin_line(above, below);
    CHECK(f.separable);
    CHECK_FALSE(f.vertical);
    CHECK(f.slope == doctest::Approx(0.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.margin == doctest::Approx(1.0));
    CHECK(f.a_above);
    CHECK(f.side(1.0, 1.5) > 0.0);
    CHECK_FALSE(max_margin_line(below, above).a_above);
}

TEST_CASE("max-margin line with a sloped gap") {
    // Points on either side of k2 = -0.5 k1 + 0.3.
    std::vector<Point2> a, b;
    for (int i = 0; i <= 10; ++i) {
        const double x = 0.1 * i;
        a.push_back({x, -0.5 * x + 0.4});
        b.push_back({x, -0.5 * x + 0.2});
    }
    const ThresholdFit f = max_margin_line(a, b);
    CHECK(f.separable);
    CHECK(f.slope == doctest::Approx(-0.5));
    CHECK(f.intercept == doctest::Approx(0.3));
}

TEST_CASE("vertical and overlapping cases") {
    const std::vector<Point2> left{{0, 0}, {0, 1}};
    const std::vector<Point2> right{{1, 0}, {1, 1}};
    const ThresholdFit v = max_margin_line(right, left);
    CHECK(v.vertical);
    CHECK(v.k1_intercept == doctest::Approx(0.5));
    CHECK(v.a_above);

    const std::vector<Point2> mixed_a{{0, 0}, {2, 2}};
    const std::vector<Point2> mixed_b{{1, 1}, {3, 3}};
    const ThresholdFit s = max_margin_line(mixed_a, mixed_b);
    CHECK_FALSE(s.separable);
    CHECK(s.margin == 0.0);

    CHECK_THROWS_AS(max_margin_line({}, left), std::invalid_argument);
}
