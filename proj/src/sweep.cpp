#include "springnet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "springnet/circuit.hpp"
#include "springnet/rng.hpp"
#include "springnet/simplex.hpp"

namespace springnet {

std::string_view to_string(StudyId id) {
    switch (id) {
        case StudyId::A: return "a";
        case StudyId::B: return "b";
        case StudyId::C: return "c";
        case StudyId::D: return "d";
    }
    return "?";
}

std::optional<StudyId> parse_study(std::string_view text) {
    if (text == "a" || text == "A") return StudyId::A;
    if (text == "b" || text == "B") return StudyId::B;
    if (text == "c" || text == "C") return StudyId::C;
    if (text == "d" || text == "D") return StudyId::D;
    return std::nullopt;
}

void GridAxis::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("grid step must be > 0");
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
        throw std::invalid_argument("grid range must be nonempty");
    }
}

std::vector<double> GridAxis::values() const {
    validate();
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9;
    }
    return out;
}

GridAxis GridAxis::parse(std::string_view text) {
    double parts[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t end = i < 2 ? text.find(':', pos) : text.size();
        if (end == std::string_view::npos) throw std::invalid_argument("grid must look like lo:hi:step");
        std::string field(text.substr(pos, end - pos));
        char* stop = nullptr;
        parts[i] = std::strtod(field.c_str(), &stop);
        if (field.empty() || stop != field.c_str() + field.size()) {
            throw std::invalid_argument("bad grid number '" + field + "'");
        }
        pos = end + 1;
    }
    GridAxis g{parts[0], parts[1], parts[2]};
    g.validate();
    return g;
}

void StudySpec::validate() const {
    k1.validate();
    k2.validate();
    if (domains.empty()) throw std::invalid_argument("study needs at least one domain");
}

StudySpec StudySpec::standard(StudyId id) {
    StudySpec s;
    s.id = id;
    return s;
}

StudySpec StudySpec::fine(StudyId id) {
    StudySpec s;
    s.id = id;
    s.k1 = {0.1, 0.4, 0.02};
    s.k2 = {0.1, 0.2, 0.02};
    return s;
}

double study_objective(StudyId id, double k1, double k2, const SpringSet& c, PlasticDomain d) {
    switch (id) {
        case StudyId::A: return k1 * terminal_force(c, d) + k2 * resistance(c);
        case StudyId::B: return k1 * terminal_force(c, d) + k2 * conductance(c);
        case StudyId::C:
        case StudyId::D: return c.cost();
    }
    return 0.0;
}

OptProblem make_problem(StudyId id, double k1, double k2, PlasticDomain d) {
    OptProblem p;
    p.domain = d;
    p.require_connected = true;
    p.tie_break_weight = kStudyTieBreak;

    LinearConstraint strength;
    strength.coeff = d == PlasticDomain::D135 ? std::array<double, 5>{-1, 0, -1, 0, -1}
                                              : std::array<double, 5>{0, -1, -1, -1, 0};
    strength.bound = -kStrengthFloor;
    p.linear_constraints.push_back(strength);

    switch (id) {
        case StudyId::A:
        case StudyId::B: {
            p.sense = Sense::Maximize;
            p.linear_constraints.push_back({{1, 1, 1, 1, 1}, kCostCap});
            p.objective = [id, k1, k2, d](const SpringSet& c) { return study_objective(id, k1, k2, c, d); };
            break;
        }
        case StudyId::C:
        case StudyId::D: {
            p.sense = Sense::Minimize;
            p.upper.fill(kUncappedBound);
            p.objective = [](const SpringSet& c) { return c.cost(); };
            const StudyId functional = id == StudyId::C ? StudyId::A : StudyId::B;
            p.nonlinear_constraints.push_back([functional, k1, k2, d](const SpringSet& c) {
                return study_objective(functional, k1, k2, c, d) - kFunctionalFloor;
            });
            break;
        }
    }
    return p;
}

OptResult max_strength(PlasticDomain d, double cost_cap) {
    if (!(cost_cap >= 0.0) || !std::isfinite(cost_cap)) throw std::invalid_argument("cost cap must be >= 0");
    std::vector<LpConstraint> rows;
    for (const auto& r : feasibility_rows(d)) {
        std::vector<double> row(kSpringCount);
        for (std::size_t j = 0; j < kSpringCount; ++j) row[j] = -r[j];
        rows.push_back({row, 0.0});
    }
    rows.push_back({std::vector<double>(kSpringCount, 1.0), cost_cap});
    const std::vector<double> force = d == PlasticDomain::D135 ? std::vector<double>{1, 0, 1, 0, 1}
                                                                : std::vector<double>{0, 1, 1, 1, 0};
    const LpSolution sol = simplex_lp(force, rows, Sense::Maximize);
    if (sol.status != LpStatus::Optimal) throw std::runtime_error("strength LP has no optimum");
    SpringSet c;
    for (std::size_t j = 0; j < kSpringCount; ++j) c[j] = sol.vertex[j];
    OptProblem p;
    p.objective = [d](const SpringSet& x) { return terminal_force(x, d); };
    p.linear_constraints.push_back({{1, 1, 1, 1, 1}, cost_cap});
    p.domain = d;
    p.require_connected = false;
    p.upper.fill(std::max(cost_cap, 1e-300));
    return make_result(p, c, Method::LP, 0, 0, 1e-9);
}

OptResult solve_instance(StudyId id, double k1, double k2, PlasticDomain d, const SweepConfig& cfg,
                         std::uint64_t seed) {
    const OptProblem p = make_problem(id, k1, k2, d);
    if (cfg.de_runs < 1) throw std::invalid_argument("de_runs must be >= 1");
    std::vector<OptResult> runs;
    if (cfg.methods != MethodChoice::RandomSearch) {
        runs.push_back(differential_evolution(p, cfg.de, seed));
        for (int r = 1; r < cfg.de_runs; ++r) {
            runs.push_back(differential_evolution(p, cfg.de, derive_seed({seed, static_cast<std::uint64_t>(r + 1)})));
        }
    }
    if (cfg.methods != MethodChoice::DE) {
        runs.push_back(random_search(p, cfg.rs_starts, derive_seed({seed, 1}), cfg.rs));
    }
    OptResult best = best_of(runs, cfg.de.constraint_tol);
    if (!cfg.polish) return best;
    const OptResult refined = polish(p, best.c_star, derive_seed({seed, 2}), cfg.rs);
    const Fitness before{best.merit, best.total_violation, best.max_violation};
    const Fitness after{refined.merit, refined.total_violation, refined.max_violation};
    return deb_better(after, before, cfg.de.constraint_tol) ? refined : best;
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t cell, PlasticDomain d) {
    return derive_seed({master_seed, static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(d)});
}

SweepReport run_study(const StudySpec& spec, const SweepConfig& cfg, std::uint64_t master_seed) {
    spec.validate();
    const std::vector<double> k1s = spec.k1.values();
    const std::vector<double> k2s = spec.k2.values();

    SweepReport report;
    report.study = spec.id;
    report.master_seed = master_seed;
    for (double k1 : k1s) {
        for (double k2 : k2s) {
            for (PlasticDomain d : spec.domains) {
                SweepRow row;
                row.k1 = k1;
                row.k2 = k2;
                row.domain = d;
                report.rows.push_back(row);
            }
        }
    }

    const std::size_t per_cell = spec.domains.size();
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < report.rows.size(); i = next++) {
            SweepRow& row = report.rows[i];
            const std::uint64_t seed = cell_seed(master_seed, i / per_cell, row.domain);
            row.result = solve_instance(spec.id, row.k1, row.k2, row.domain, cfg, seed);
        }
    };
    unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, report.rows.size())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return report;
}

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string label_for(StudyId study, const SweepRow& row, const ClassifyOptions& o) {
    const OptResult& r = row.result;
    switch (study) {
        case StudyId::A: {
            if (near(r.F, 0.75, o.value_tol) && near(r.R, 10.0 / 3.0, o.value_tol)) return "red";
            if (near(r.F, 1.0, o.value_tol) && near(r.R, 2.0, o.value_tol)) return "blue";
            const double red = 0.75 * row.k1 + (10.0 / 3.0) * row.k2;
            const double blue = row.k1 + 2.0 * row.k2;
            return std::abs(red - blue) < o.tie_gap ? "degenerate" : "other";
        }
        case StudyId::B:
            return near(r.F, 1.0, o.value_tol) && near(r.G, 0.5, o.value_tol) ? "uniform" : "other";
        case StudyId::C:
        case StudyId::D:
            if (!r.feasible) return "infeasible";
            return r.C <= 1.5 + o.cost_tol ? "base" : "raised";
    }
    return "other";
}

}  // namespace

SweepReport classify_cells(SweepReport report, const ClassifyOptions& opts) {
    std::vector<SpringSet> representatives;
    for (SweepRow& row : report.rows) {
        row.label = label_for(report.study, row, opts);
        int id = -1;
        for (std::size_t k = 0; k < representatives.size(); ++k) {
            if (max_abs_diff(representatives[k], row.result.c_star) <= opts.cluster_tol) {
                id = static_cast<int>(k);
                break;
            }
        }
        if (id < 0) {
            id = static_cast<int>(representatives.size());
            representatives.push_back(row.result.c_star);
        }
        row.cluster = id;
    }
    return report;
}

std::vector<SweepCell> group_cells(const SweepReport& report) {
    std::vector<SweepCell> cells;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const SweepRow& row = report.rows[i];
        if (cells.empty() || cells.back().k1 != row.k1 || cells.back().k2 != row.k2) {
            SweepCell cell;
            cell.k1 = row.k1;
            cell.k2 = row.k2;
            cell.best_row = i;
            cells.push_back(cell);
        }
        SweepCell& cell = cells.back();
        cell.rows.push_back(i);
        const OptResult& cand = row.result;
        const OptResult& best = report.rows[cell.best_row].result;
        const Fitness fc{cand.merit, cand.total_violation, cand.max_violation};
        const Fitness fb{best.merit, best.total_violation, best.max_violation};
        if (deb_better(fc, fb, 1e-8)) cell.best_row = i;
    }
    for (SweepCell& cell : cells) {
        cell.label = report.rows[cell.best_row].label;
        cell.cluster = report.rows[cell.best_row].cluster;
    }
    return cells;
}

}  // namespace springnet
