#include "springnet/propositions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "springnet/report.hpp"
#include "springnet/threshold.hpp"

namespace springnet {

namespace {

constexpr double kValueTol = 0.01;
constexpr double kComponentTol = 0.02;
constexpr double kPairTol = 0.03;
constexpr double kDomainTol = 2e-3;
constexpr double kTieSlope = 0.1875;  // 0.75 k1 + (10/3) k2 = k1 + 2 k2

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const SweepReport* find(std::span<const SweepReport> reports, StudyId id) {
    for (const SweepReport& r : reports) {
        if (r.study == id) return &r;
    }
    return nullptr;
}

double grid_step(const SweepReport& r) {
    std::set<double> k2s;
    for (const SweepRow& row : r.rows) k2s.insert(row.k2);
    double step = 0.1;
    bool first = true;
    for (auto it = k2s.begin(); it != k2s.end() && std::next(it) != k2s.end(); ++it) {
        const double d = *std::next(it) - *it;
        if (first || d < step) step = d;
        first = false;
    }
    return step;
}

struct Clauses {
    std::vector<ClauseCheck> list;

    void add(std::string id, std::string clause) {
        list.push_back({std::move(id), std::move(clause), ClauseStatus::NotEvaluated, ""});
    }
    void set(const std::string& id, bool ok, std::string detail) {
        for (ClauseCheck& c : list) {
            if (c.id == id) {
                c.status = ok ? ClauseStatus::Pass : ClauseStatus::Fail;
                c.detail = std::move(detail);
            }
        }
    }
};

// Threshold between two labels, or nullopt when a class is empty.
std::optional<ThresholdFit> fit_between(const SweepReport& r, const char* a, const char* b) {
    try {
        return detect_threshold(r, a, b);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

void check_a(const SweepReport& r, Clauses& out) {
    int bad = 0, blue_c3 = 0;
    for (const SweepRow& row : r.rows) {
        if (row.label != "red" && row.label != "blue" && row.label != "degenerate") ++bad;
        if (row.label == "blue" && row.result.c_star[2] > kComponentTol) ++blue_c3;
    }
    out.set("A.classes", bad == 0, fmt("%.0f rows outside the two classes", bad));
    out.set("A.blue_c3", blue_c3 == 0, fmt("%.0f blue rows with c3 > 0.02", blue_c3));

    const auto fit = fit_between(r, "red", "blue");
    if (!fit) {
        out.set("A.threshold", false, "one of the classes is empty");
        return;
    }
    double lo = 1e300, hi = -1e300;
    for (const SweepRow& row : r.rows) {
        lo = std::min(lo, row.k1);
        hi = std::max(hi, row.k1);
    }
    double worst = 0.0;
    if (fit->vertical) {
        worst = 1e300;
    } else {
        for (double k1 : {lo, hi}) {
            worst = std::max(worst, std::abs(fit->slope * k1 + fit->intercept - kTieSlope * k1));
        }
    }
    const double step = grid_step(r);
    const bool ok = fit->separable && fit->a_above && worst <= step + 1e-12;
    out.set("A.threshold", ok,
            fmt("fit k2 = %.4f k1 %+.4f, max offset from tie line %.4f", fit->slope, fit->intercept, worst) +
                (fit->separable ? "" : ", not separable"));
}

void check_b(const SweepReport& r, Clauses& out) {
    const SpringSet target{{0.5, 0.5, 0.0, 0.5, 0.5}};
    double worst_c = 0.0, worst_v = 0.0, worst_c3 = 0.0;
    for (const SweepRow& row : r.rows) {
        const OptResult& o = row.result;
        worst_c = std::max(worst_c, max_abs_diff(o.c_star, target));
        worst_v = std::max({worst_v, std::abs(o.F - 1.0), std::abs(o.G - 0.5)});
        worst_c3 = std::max(worst_c3, o.c_star[2]);
    }
    out.set("B.uniform", worst_c <= kComponentTol, fmt("max |c - (0.5,0.5,0,0.5,0.5)| = %.4g", worst_c));
    out.set("B.values", worst_v <= kValueTol, fmt("max deviation of (F,G) from (1,0.5) = %.4g", worst_v));
    out.set("B.c3", worst_c3 <= kComponentTol, fmt("max c3 = %.4g", worst_c3));
}

void check_c(const SweepReport& r, Clauses& out) {
    const auto fit = fit_between(r, "base", "raised");
    if (!fit) {
        out.set("C.base", false, "one of the classes is empty");
        out.set("C.slope", false, "one of the classes is empty");
    } else {
        int bad = 0;
        for (const SweepRow& row : r.rows) {
            const OptResult& o = row.result;
            if (fit->side(row.k1, row.k2) * (fit->a_above ? 1.0 : -1.0) <= 0.0) continue;
            const double fr = row.k1 * o.F + row.k2 * o.R;
            const bool ok = std::abs(o.C - 1.5) <= kValueTol && std::abs(o.F - 0.75) <= kValueTol &&
                            fr >= kFunctionalFloor - kValueTol;
            if (!ok) ++bad;
        }
        out.set("C.base", fit->separable && fit->a_above && bad == 0,
                fmt("%.0f rows above the fitted line break C = 1.5, F = 0.75", bad) +
                    (fit->separable ? "" : ", not separable"));
        out.set("C.slope", std::abs(fit->slope + 0.5) <= 0.25 && !fit->vertical,
                fmt("fitted slope %.4f", fit->slope));
    }

    int bad_active = 0;
    for (const SweepRow& row : r.rows) {
        if (row.label != "raised") continue;
        const double fr = row.k1 * row.result.F + row.k2 * row.result.R;
        if (std::abs(fr - kFunctionalFloor) > kValueTol) ++bad_active;
    }
    out.set("C.active", bad_active == 0, fmt("%.0f raised rows with F_R away from 0.5", bad_active));

    // Exception cells, across both domains.
    std::vector<std::pair<double, double>> found;
    for (const ExceptionRow& e : find_exceptions(r)) {
        const bool seen = std::any_of(found.begin(), found.end(), [&](const auto& p) {
            return std::abs(p.first - e.k1) < 1e-9 && std::abs(p.second - e.k2) < 1e-9;
        });
        if (!seen) found.push_back({e.k1, e.k2});
    }
    const std::vector<std::pair<double, double>> expected{{0.22, 0.1}, {0.28, 0.1}};
    bool match = found.size() == expected.size();
    for (const auto& [k1, k2] : expected) {
        match = match && std::any_of(found.begin(), found.end(), [&](const auto& p) {
                    return std::abs(p.first - k1) < 1e-9 && std::abs(p.second - k2) < 1e-9;
                });
    }
    std::string listed;
    for (const auto& [k1, k2] : found) listed += fmt(" (%.2f,%.2f)", k1, k2);
    out.set("C.exceptions", match, "exception cells:" + (listed.empty() ? std::string(" none") : listed));
}

void check_d(const SweepReport& r, Clauses& out) {
    int bad_base = 0, bad_below = 0;
    for (const SweepRow& row : r.rows) {
        const OptResult& o = row.result;
        if (row.label == "base") {
            if (std::abs(o.C - 1.5) > kValueTol || std::abs(o.F - 0.75) > kValueTol ||
                std::abs(o.G - 0.375) > kValueTol) {
                ++bad_base;
            }
        } else {
            const SpringSet& c = o.c_star;
            const double fg = row.k1 * o.F + row.k2 * o.G;
            if (std::abs(fg - kFunctionalFloor) > kValueTol || c[2] > kComponentTol ||
                std::abs(c[0] - c[3]) > kPairTol || std::abs(c[1] - c[4]) > kPairTol) {
                ++bad_below;
            }
        }
    }
    out.set("D.base", bad_base == 0, fmt("%.0f base rows away from C=1.5, F=0.75, G=0.375", bad_base));
    out.set("D.below", bad_below == 0, fmt("%.0f raised rows break F_G=0.5 or c1=c4, c2=c5, c3=0", bad_below));
    const auto fit = fit_between(r, "base", "raised");
    if (!fit) {
        out.set("D.slope", false, "one of the classes is empty");
    } else {
        out.set("D.slope", fit->separable && fit->a_above && !fit->vertical && std::abs(fit->slope + 2.0) <= 0.5,
                fmt("fitted slope %.4f", fit->slope) + (fit->separable ? "" : ", not separable"));
    }
}

void check_domains(std::span<const SweepReport> reports, Clauses& out) {
    double worst = 0.0;
    bool any = false;
    for (const SweepReport& r : reports) {
        std::map<std::pair<double, double>, std::map<PlasticDomain, double>> values;
        for (const SweepRow& row : r.rows) values[{row.k1, row.k2}][row.domain] = row.result.value;
        for (const auto& [cell, by_domain] : values) {
            if (by_domain.size() < 2) continue;
            any = true;
            worst = std::max(worst,
                             std::abs(by_domain.at(PlasticDomain::D135) - by_domain.at(PlasticDomain::D234)));
        }
    }
    if (any) out.set("mirror.values", worst <= kDomainTol, fmt("max |value(D135) - value(D234)| = %.3g", worst));
}

}  // namespace

std::string_view to_string(ClauseStatus s) {
    switch (s) {
        case ClauseStatus::Pass: return "pass";
        case ClauseStatus::Fail: return "fail";
        case ClauseStatus::NotEvaluated: return "not evaluated";
    }
    return "?";
}

std::vector<ClauseCheck> verify_propositions(std::span<const SweepReport> reports) {
    Clauses out;
    out.add("A.classes", "every study A optimum has (F,R) = (0.75,10/3) or (1,2), or is a near tie");
    out.add("A.blue_c3", "study A optima with F = 1 have c3 = 0");
    out.add("A.threshold", "study A classes are separable, red above a line within one grid step of k2 = 0.1875 k1");
    out.add("B.uniform", "study B optimum is c = (0.5,0.5,0,0.5,0.5) in every cell");
    out.add("B.values", "study B optimum has (F,G) = (1,0.5) in every cell");
    out.add("B.c3", "study B optimum has c3 = 0 in every cell");
    out.add("C.base", "study C: C = 1.5 and F = 0.75 with F_R >= 0.5 above the fitted threshold L1");
    out.add("C.slope", "study C: threshold L1 has slope -0.5 +- 0.25");
    out.add("C.active", "study C: F_R = 0.5 wherever C > 1.5");
    out.add("C.exceptions", "study C: C > 1.5 with c3 = 0 exactly at (0.22,0.1) and (0.28,0.1)");
    out.add("D.base", "study D: C = 1.5 with F = 0.75, G = 0.375 above the threshold");
    out.add("D.below", "study D: below the threshold F_G = 0.5 and c1 = c4, c2 = c5, c3 = 0");
    out.add("D.slope", "study D: threshold has slope -2 +- 0.5");
    out.add("mirror.values", "optimal values on D135 and D234 agree within 2e-3 in every cell");

    if (const SweepReport* r = find(reports, StudyId::A)) check_a(*r, out);
    if (const SweepReport* r = find(reports, StudyId::B)) check_b(*r, out);
    if (const SweepReport* r = find(reports, StudyId::C)) check_c(*r, out);
    if (const SweepReport* r = find(reports, StudyId::D)) check_d(*r, out);
    check_domains(reports, out);
    return out.list;
}

}  // namespace springnet
