#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "springnet/spring_set.hpp"

namespace springnet {

/// Which springs reach plastic mode terminally: {1,3,5} or {2,3,4}.
enum class PlasticDomain { D135, D234 };

inline constexpr double kBoundaryTol = 1e-9;

std::string_view to_string(PlasticDomain d);
std::optional<PlasticDomain> parse_domain(std::string_view text);

/// Slack of each feasibility inequality; a slack >= 0 means satisfied.
///
/// D135: (c2+c3+c5, c2-c3-c5, c4+c1+c3, c4-c1-c3)
/// D234: (c1+c3+c4, c1-c3-c4, c5+c2+c3, c5-c2-c3)
struct FeasibilityReport {
    std::array<double, 4> slacks{};
    bool feasible = false;
    bool on_boundary = false;
};

/// Coefficient rows r_k with slack_k = r_k . c, in the order listed above.
std::array<std::array<double, kSpringCount>, 4> feasibility_rows(PlasticDomain d);

/// Terminal response force: c1+c3+c5 on D135, c2+c3+c4 on D234.
/// Does not check feasibility.
double terminal_force(const SpringSet& c, PlasticDomain d);

/// Closed feasibility test: feasible iff every slack >= -tol; on_boundary
/// iff some |slack| <= tol.
FeasibilityReport feasibility(const SpringSet& c, PlasticDomain d, double tol = kBoundaryTol);

/// Left-right reflection of the bridge, (c2,c1,c3,c5,c4). Maps D135 onto D234
/// while preserving force and resistance.
SpringSet mirror(const SpringSet& c);

struct Evaluation {
    double F = 0.0;
    double R = 0.0;
    double G = 0.0;
    double C = 0.0;
    FeasibilityReport feasibility;
};

Evaluation evaluate_all(const SpringSet& c, PlasticDomain d);

}  // namespace springnet
