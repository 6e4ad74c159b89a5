#include <cmath>
#include <limits>
#include <random>
#include <regex>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "springnet/propositions.hpp"
#include "springnet/report.hpp"

using namespace springnet;

namespace {

SweepReport random_report(std::uint64_t seed, StudyId study = StudyId::C) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    SweepReport r;
    r.study = study;
    r.master_seed = seed;
    for (double k1 : {0.1, 0.2, 0.3}) {
        for (double k2 : {0.1, 0.2}) {
            for (PlasticDomain d : {PlasticDomain::D135, PlasticDomain::D234}) {
                SweepRow row;
                row.k1 = k1;
                row.k2 = k2;
                row.domain = d;
                for (auto& v : row.result.c_star.c) v = u(gen);
                row.result.F = u(gen);
                row.result.R = u(gen);
                row.result.G = 1.0 / row.result.R;
                row.result.C = row.result.c_star.cost();
                row.result.value = row.result.C;
                row.result.merit = row.result.C;
                row.result.feasible = true;
                row.result.seed = gen();
                row.result.iterations = 17;
                row.result.method = Method::RandomSearch;
                r.rows.push_back(row);
            }
        }
    }
    return classify_cells(r);
}

SweepReport uniform_b() {
    SweepReport r;
    r.study = StudyId::B;
    for (int i = 1; i <= 10; ++i) {
        for (int j = 1; j <= 10; ++j) {
            for (PlasticDomain d : {PlasticDomain::D135, PlasticDomain::D234}) {
                SweepRow row;
                row.k1 = i / 10.0;
                row.k2 = j / 10.0;
                row.domain = d;
                row.result.c_star = {{0.5, 0.5, 0, 0.5, 0.5}};
                row.result.F = 1.0;
                row.result.R = 2.0;
                row.result.G = 0.5;
                row.result.C = 2.0;
                row.result.value = row.k1 + 0.5 * row.k2;
                row.result.feasible = true;
                r.rows.push_back(row);
            }
        }
    }
    return classify_cells(r);
}

}  // namespace

TEST_CASE("JSON round trip") {
    SweepReport r = random_report(41);
    r.rows[3].result.R = std::numeric_limits<double>::infinity();
    r.rows[3].result.G = 0.0;
    const std::string text = to_json(r);
    const SweepReport back = from_json(text);
    CHECK(to_json(back) == text);
    CHECK(std::isinf(back.rows[3].result.R));
    CHECK(back.rows[5].result.seed == r.rows[5].result.seed);
    CHECK(back.rows[5].result.method == Method::RandomSearch);
    CHECK(back.study == StudyId::C);
    CHECK(back.master_seed == 41);
}

TEST_CASE("malformed JSON is rejected") {
    CHECK_THROWS_AS(from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(from_json("{\"study\":\"q\",\"master_seed\":0,\"cells\":[]}"), std::invalid_argument);
    CHECK_THROWS_AS(from_json("[]"), std::invalid_argument);
    const std::string ok = to_json(random_report(1));
    std::string bad = ok;
    bad.replace(bad.find("\"d135\""), 6, "\"d999\"");
    CHECK_THROWS_AS(from_json(bad), std::invalid_argument);
}

TEST_CASE("CSV round trip at ten significant digits") {
    const SweepReport r = random_report(42);
    const std::string csv = to_csv(r);
    CHECK(csv.rfind(std::string(kCsvHeader) + "\r\n", 0) == 0);
    const auto rows = parse_csv(csv);
    const auto want = table_rows(r);
    REQUIRE(rows.size() == want.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].k1 == doctest::Approx(want[i].k1).epsilon(1e-9));
        CHECK(rows[i].domain == want[i].domain);
        for (std::size_t j = 0; j < kSpringCount; ++j) {
            CHECK(rows[i].c[j] == doctest::Approx(want[i].c[j]).epsilon(1e-9));
        }
        CHECK(rows[i].F == doctest::Approx(want[i].F).epsilon(1e-9));
        CHECK(rows[i].R == doctest::Approx(want[i].R).epsilon(1e-9));
        CHECK(rows[i].G == doctest::Approx(want[i].G).epsilon(1e-9));
        CHECK(rows[i].C == doctest::Approx(want[i].C).epsilon(1e-9));
        CHECK(rows[i].value == doctest::Approx(want[i].value).epsilon(1e-9));
        CHECK(rows[i].label == want[i].label);
        CHECK(rows[i].cluster == want[i].cluster);
    }
}

TEST_CASE("CSV quoting and errors") {
    SweepReport r = random_report(43);
    r.rows[0].label = "odd, \"label\"";
    r.rows[1].result.R = std::numeric_limits<double>::infinity();
    const auto rows = parse_csv(to_csv(r));
    CHECK(rows[0].label == "odd, \"label\"");
    CHECK(std::isinf(rows[1].R));

    CHECK_THROWS_AS(parse_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv("a,b\r\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\r\n1,2,d135\r\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\r\n\"open"), std::invalid_argument);

    SweepReport empty;
    CHECK(parse_csv(to_csv(empty)).empty());
}

TEST_CASE("SVG output is deterministic") {
    const SweepReport r = random_report(44);
    PlotSpec spec;
    spec.thresholds.push_back({-0.5, 0.3, false, 0.0, true, 0.01, true});
    spec.title = "study C";
    const std::string a = render_svg(r, spec);
    CHECK(a == render_svg(from_json(to_json(r)), spec));
    CHECK(a.find("<line") != std::string::npos);
    CHECK(a.rfind("<?xml", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
}

TEST_CASE("empty report gives an SVG with axes only") {
    const std::string s = render_svg(SweepReport{});
    CHECK(s.find("<circle") == std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
}

TEST_CASE("a uniform study B report draws one colour at one radius") {
    const SweepReport r = uniform_b();
    PlotSpec spec;
    spec.radius_metric = RadiusMetric::Cost;
    const std::string s = render_svg(r, spec);
    const std::regex circle("<circle [^>]* r=\"([0-9.]+)\" fill=\"(#[0-9a-f]+)\"");
    std::set<std::string> radii, colors;
    int count = 0;
    for (auto it = std::sregex_iterator(s.begin(), s.end(), circle); it != std::sregex_iterator(); ++it) {
        radii.insert((*it)[1]);
        colors.insert((*it)[2]);
        ++count;
    }
    CHECK(count == 100);
    CHECK(radii.size() == 1);
    CHECK(colors.size() == 1);
}

TEST_CASE("disc colours follow the labels") {
    SweepReport r = uniform_b();
    r.rows[0].label = "mystery";
    CHECK_THROWS_AS(render_svg(r), std::invalid_argument);
    PlotSpec spec;
    spec.radius_scale = 0.0;
    CHECK_THROWS_AS(render_svg(uniform_b(), spec), std::invalid_argument);
}

TEST_CASE("exceptions table") {
    SweepReport r = random_report(45);
    for (SweepRow& row : r.rows) row.result.c_star[2] = 1.0;
    CHECK(find_exceptions(r).empty());
    const std::string none = exceptions_markdown({});
    CHECK(none.find("| (k1,k2) | (c1,c2,c3,c4,c5) | F | R | C |") != std::string::npos);

    r.rows[2].result.c_star = {{0.6, 0.2, 0.0, 1.0, 1.0}};
    r.rows[2].result.C = 2.8;
    const auto ex = find_exceptions(r);
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].k1 == r.rows[2].k1);
    CHECK(exceptions_markdown(ex).find("2.80") != std::string::npos);
}

TEST_CASE("proposition checks on synthetic reports") {
    const SweepReport b = uniform_b();
    const std::vector<SweepReport> reports{b};
    const auto checks = verify_propositions(reports);
    CHECK(checks.size() == 14);
    for (const ClauseCheck& c : checks) {
        if (c.id.rfind("B.", 0) == 0 || c.id == "mirror.values") {
            CHECK_MESSAGE(c.status == ClauseStatus::Pass, c.id);
        } else {
            CHECK_MESSAGE(c.status == ClauseStatus::NotEvaluated, c.id);
        }
    }

    SweepReport broken = b;
    broken.rows[7].result.c_star[2] = 0.3;
    const std::vector<SweepReport> again{broken};
    for (const ClauseCheck& c : verify_propositions(again)) {
        if (c.id == "B.c3") CHECK(c.status == ClauseStatus::Fail);
    }
    CHECK(to_string(ClauseStatus::NotEvaluated) == "not evaluated");
}
