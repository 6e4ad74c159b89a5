#include "springnet/plasticity.hpp"

#include <algorithm>
#include <cmath>

#include "springnet/circuit.hpp"

namespace springnet {

std::string_view to_string(PlasticDomain d) {
    return d == PlasticDomain::D135 ? "d135" : "d234";
}

std::optional<PlasticDomain> parse_domain(std::string_view text) {
    if (text == "d135" || text == "D135") return PlasticDomain::D135;
    if (text == "d234" || text == "D234") return PlasticDomain::D234;
    return std::nullopt;
}

double terminal_force(const SpringSet& c, PlasticDomain d) {
    require_valid(c);
    return d == PlasticDomain::D135 ? c[0] + c[2] + c[4] : c[1] + c[2] + c[3];
}

std::array<std::array<double, kSpringCount>, 4> feasibility_rows(PlasticDomain d) {
    if (d == PlasticDomain::D135) {
        return {{{0, 1, 1, 0, 1}, {0, 1, -1, 0, -1}, {1, 0, 1, 1, 0}, {-1, 0, -1, 1, 0}}};
    }
    return {{{1, 0, 1, 1, 0}, {1, 0, -1, -1, 0}, {0, 1, 1, 0, 1}, {0, -1, -1, 0, 1}}};
}

FeasibilityReport feasibility(const SpringSet& s, PlasticDomain d, double tol) {
    require_valid(s);
    FeasibilityReport rep;
    const auto rows = feasibility_rows(d);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        double v = 0.0;
        for (std::size_t j = 0; j < kSpringCount; ++j) v += rows[k][j] * s[j];
        rep.slacks[k] = v;
    }
    rep.feasible = std::all_of(rep.slacks.begin(), rep.slacks.end(),
                               [tol](double v) { return v >= -tol; });
    rep.on_boundary = std::any_of(rep.slacks.begin(), rep.slacks.end(),
                                  [tol](double v) { return std::abs(v) <= tol; });
    return rep;
}

SpringSet mirror(const SpringSet& c) {
    return SpringSet{{c[1], c[0], c[2], c[4], c[3]}};
}

Evaluation evaluate_all(const SpringSet& c, PlasticDomain d) {
    Evaluation e;
    e.F = terminal_force(c, d);
    e.R = resistance(c);
    e.G = conductance(c);
    e.C = c.cost();
    e.feasibility = feasibility(c, d);
    return e;
}

}  // namespace springnet
