#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "springnet/optimize.hpp"
#include "springnet/plasticity.hpp"

namespace springnet {

/// The four design studies over the weight plane (k1, k2):
///   A: maximize k1 F + k2 R   s.t. C <= 2, F >= 0.75
///   B: maximize k1 F + k2 G   s.t. C <= 2, F >= 0.75
///   C: minimize C             s.t. F >= 0.75, k1 F + k2 R >= 0.5
///   D: minimize C             s.t. F >= 0.75, k1 F + k2 G >= 0.5
/// each together with the feasibility conditions of the chosen domain.
enum class StudyId { A, B, C, D };

std::string_view to_string(StudyId id);
std::optional<StudyId> parse_study(std::string_view text);

inline constexpr double kCostCap = 2.0;
inline constexpr double kStrengthFloor = 0.75;
inline constexpr double kFunctionalFloor = 0.5;
/// Upper box bound per spring for the cost-minimization studies, which
/// carry no cost cap.
inline constexpr double kUncappedBound = 4.0;
/// Least-norm tie-break weight applied in every study.
inline constexpr double kStudyTieBreak = 1e-2;

struct GridAxis {
    double lo = 0.1;
    double hi = 1.0;
    double step = 0.1;

    void validate() const;
    /// lo, lo+step, ... up to hi inclusive, rounded to 1e-9.
    std::vector<double> values() const;
    /// "lo:hi:step"
    static GridAxis parse(std::string_view text);
};

struct StudySpec {
    StudyId id = StudyId::A;
    GridAxis k1;
    GridAxis k2;
    std::vector<PlasticDomain> domains{PlasticDomain::D135, PlasticDomain::D234};

    void validate() const;
    /// 0.1..1.0 step 0.1 on both axes, both domains.
    static StudySpec standard(StudyId id);
    /// k1 in 0.1..0.4, k2 in 0.1..0.2, step 0.02.
    static StudySpec fine(StudyId id);
};

/// Maximum terminal force on domain d under C <= cost_cap, solved exactly
/// as a linear program. The result carries Method::LP.
OptResult max_strength(PlasticDomain d, double cost_cap = kCostCap);

/// The study's objective value k1 F + k2 R, k1 F + k2 G, or C.
double study_objective(StudyId id, double k1, double k2, const SpringSet& c, PlasticDomain d);

OptProblem make_problem(StudyId id, double k1, double k2, PlasticDomain d);

enum class MethodChoice { DE, RandomSearch, Both };

struct SweepConfig {
    DEConfig de;
    RandomSearchConfig rs;
    int rs_starts = 20;
    int de_runs = 1;     // independent DE restarts per instance
    bool polish = true;  // rerun the local search from the winner
    MethodChoice methods = MethodChoice::Both;
    unsigned threads = 1;  // 0 = hardware concurrency
};

/// Solves one (k1, k2, domain) instance with the configured methods and
/// keeps best_of, then optionally polishes the winner. The first DE run uses
/// `seed`; restarts, random search and polishing run on seeds derived from it.
OptResult solve_instance(StudyId id, double k1, double k2, PlasticDomain d, const SweepConfig& cfg,
                         std::uint64_t seed);

struct SweepRow {
    double k1 = 0.0;
    double k2 = 0.0;
    PlasticDomain domain = PlasticDomain::D135;
    OptResult result;
    std::string label;
    int cluster = -1;
};

/// Rows ordered by k1, then k2, then domain order of the spec.
struct SweepReport {
    StudyId study = StudyId::A;
    std::uint64_t master_seed = 0;
    std::vector<SweepRow> rows;
};

/// Seed of grid cell `cell` on domain `d`; independent of scheduling.
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t cell, PlasticDomain d);

/// Runs every grid cell on every requested domain. Cells with no feasible
/// point stay in the report with result.feasible == false.
SweepReport run_study(const StudySpec& spec, const SweepConfig& cfg, std::uint64_t master_seed);

struct ClassifyOptions {
    double value_tol = 0.02;    // signature match for (F,R) / (F,G)
    double cost_tol = 1e-3;     // C == 1.5 test for studies C and D
    double cluster_tol = 0.03;  // componentwise distance within a c-cluster
    double tie_gap = 0.005;     // study A near-tie band
};

/// Labels:
///   A: "red" (F,R)=(0.75,10/3), "blue" (F,R)=(1,2), "degenerate" for an
///      unmatched cell whose two candidate optima differ by < tie_gap,
///      otherwise "other";
///   B: "uniform" (F,G)=(1,0.5), otherwise "other";
///   C, D: "base" for C = 1.5, "raised" for C > 1.5, "infeasible" when the
///      solver found no feasible point.
/// Clusters are assigned greedily in row order against each cluster's
/// first member.
SweepReport classify_cells(SweepReport report, const ClassifyOptions& opts = {});

/// One grid point with the best row across domains.
struct SweepCell {
    double k1 = 0.0;
    double k2 = 0.0;
    std::vector<std::size_t> rows;
    std::size_t best_row = 0;
    std::string label;
    int cluster = -1;
};

std::vector<SweepCell> group_cells(const SweepReport& report);

}  // namespace springnet
