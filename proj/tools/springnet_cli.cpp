#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "springnet/admissibility.hpp"
#include "springnet/circuit.hpp"
#include "springnet/plasticity.hpp"
#include "springnet/propositions.hpp"
#include "springnet/report.hpp"
#include "springnet/sweep.hpp"
#include "springnet/threshold.hpp"

using nlohmann::json;
using namespace springnet;

namespace {

// JSON has no infinity.
json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json spring_json(const SpringSet& c) { return json(c.c); }

json result_json(const OptResult& r) {
    return {{"c", spring_json(r.c_star)}, {"value", real(r.value)},     {"merit", real(r.merit)},
            {"F", real(r.F)},             {"R", real(r.R)},             {"G", real(r.G)},
            {"C", real(r.C)},             {"feasible", r.feasible},     {"max_violation", r.max_violation},
            {"total_violation", r.total_violation},
            {"method", std::string(to_string(r.method))},
            {"seed", r.seed},             {"iterations", r.iterations}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

PlasticDomain domain_arg(const std::string& text) {
    const auto d = parse_domain(text);
    if (!d) throw CLI::ValidationError("--domain", "expected d135 or d234");
    return *d;
}

StudyId study_arg(const std::string& text) {
    const auto s = parse_study(text);
    if (!s) throw CLI::ValidationError("--study", "expected a, b, c or d");
    return *s;
}

MethodChoice method_arg(const std::string& text) {
    if (text == "de") return MethodChoice::DE;
    if (text == "rs") return MethodChoice::RandomSearch;
    if (text == "both") return MethodChoice::Both;
    throw CLI::ValidationError("--method", "expected de, rs or both");
}

std::vector<PlasticDomain> domains_arg(const std::string& text) {
    if (text == "both") return {PlasticDomain::D135, PlasticDomain::D234};
    return {domain_arg(text)};
}

json threshold_json(const ThresholdFit& t) {
    json j{{"separable", t.separable}, {"margin", t.margin}, {"a_above", t.a_above}, {"vertical", t.vertical}};
    if (t.vertical) {
        j["k1"] = t.k1_intercept;
    } else {
        j["slope"] = t.slope;
        j["intercept"] = t.intercept;
    }
    return j;
}

std::pair<std::string, std::string> class_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == text.size()) {
        throw CLI::ValidationError("--threshold", "expected two labels, e.g. red,blue");
    }
    return {text.substr(0, comma), text.substr(comma + 1)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Five-spring bridge network: evaluation and design studies"};
    app.require_subcommand(1);

    // resistance
    std::string c_text;
    bool oracle = false;
    auto* res = app.add_subcommand("resistance", "Equivalent resistance and conductance between nodes 1 and 4");
    res->add_option("--c", c_text, "c1,c2,c3,c4,c5")->required();
    res->add_flag("--oracle", oracle, "Also solve the node-potential system");

    // evaluate
    std::string domain_text = "d135";
    auto* ev = app.add_subcommand("evaluate", "Force, resistance, cost and feasibility of one design");
    ev->add_option("--c", c_text, "c1,c2,c3,c4,c5")->required();
    ev->add_option("--domain", domain_text, "d135 or d234");

    // admissible
    std::string matrix_file;
    bool benchmark = false;
    auto* adm = app.add_subcommand("admissible", "Irreducible admissible signed index sets");
    auto* mf = adm->add_option("--matrix-file", matrix_file, "JSON {\"matrix\": [[..]], \"target\": [..]}");
    auto* bm = adm->add_flag("--benchmark", benchmark, "Use the built-in bridge matrix");
    mf->excludes(bm);

    // strength
    double cost_cap = kCostCap;
    auto* st = app.add_subcommand("strength", "Largest terminal force under a cost cap (LP)");
    st->add_option("--domain", domain_text, "d135 or d234");
    st->add_option("--cost-cap", cost_cap, "Cost cap")->check(CLI::NonNegativeNumber);

    // optimize
    std::string study_text = "a", method_text = "both";
    double k1 = 0.5, k2 = 0.5;
    std::uint64_t seed = 42;
    int rs_starts = 20;
    auto* opt = app.add_subcommand("optimize", "Solve one study instance");
    opt->add_option("--study", study_text, "a, b, c or d")->required();
    opt->add_option("--k1", k1, "Weight k1")->required();
    opt->add_option("--k2", k2, "Weight k2")->required();
    opt->add_option("--domain", domain_text, "d135 or d234");
    opt->add_option("--method", method_text, "de, rs or both");
    opt->add_option("--seed", seed, "Seed");
    opt->add_option("--rs-starts", rs_starts, "Random search starts")->check(CLI::PositiveNumber);

    // sweep
    std::string grid_text, grid_k2_text, out_path, csv_path, domains_text = "both";
    bool fine = false;
    unsigned threads = 0;
    auto* sw = app.add_subcommand("sweep", "Solve a study over a grid of weights");
    sw->add_option("--study", study_text, "a, b, c or d")->required();
    sw->add_option("--grid", grid_text, "lo:hi:step for k1 (and k2 unless --grid-k2)");
    sw->add_option("--grid-k2", grid_k2_text, "lo:hi:step for k2");
    sw->add_flag("--fine", fine, "Fine grid k1 0.1:0.4, k2 0.1:0.2, step 0.02");
    sw->add_option("--seed", seed, "Master seed");
    sw->add_option("--out", out_path, "JSON report path (stdout if omitted)");
    sw->add_option("--csv", csv_path, "CSV mirror path");
    sw->add_option("--threads", threads, "Worker threads, 0 = all cores");
    sw->add_option("--domains", domains_text, "d135, d234 or both");
    sw->add_option("--method", method_text, "de, rs or both");
    sw->add_option("--rs-starts", rs_starts, "Random search starts")->check(CLI::PositiveNumber);

    // report
    std::string in_path, svg_path, exceptions_path, threshold_text, radius_text = "value", title;
    auto* rep = app.add_subcommand("report", "Render a sweep report");
    rep->add_option("--in", in_path, "JSON report")->required()->check(CLI::ExistingFile);
    rep->add_option("--svg", svg_path, "SVG disc plot");
    rep->add_option("--csv", csv_path, "CSV table");
    rep->add_option("--exceptions", exceptions_path, "Markdown table of C > 1.5 rows with c3 = 0");
    rep->add_option("--threshold", threshold_text, "Fit and draw a threshold between two labels, e.g. base,raised");
    rep->add_option("--radius", radius_text, "Disc radius from value or cost")
        ->check(CLI::IsMember({"value", "cost"}));
    rep->add_option("--title", title, "Plot title");

    // verify
    std::vector<std::string> inputs;
    auto* ver = app.add_subcommand("verify", "Check the study claims against sweep reports");
    ver->add_option("inputs", inputs, "JSON reports")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*res) {
            const SpringSet c = parse_spring_set(c_text);
            require_valid(c);
            json out{{"R", real(resistance(c))}, {"G", conductance(c)}};
            if (oracle) {
                out["R_oracle"] = real(solve_network(bridge_network(c)));
                out["printed_form_disagrees"] = printed_form_disagrees(c);
            }
            std::cout << out.dump() << "\n";
        } else if (*ev) {
            const SpringSet c = parse_spring_set(c_text);
            require_valid(c);
            const PlasticDomain d = domain_arg(domain_text);
            const Evaluation e = evaluate_all(c, d);
            json out{{"c", spring_json(c)},
                     {"domain", std::string(to_string(d))},
                     {"F", e.F},
                     {"R", real(e.R)},
                     {"G", e.G},
                     {"C", e.C},
                     {"slacks", e.feasibility.slacks},
                     {"feasible", e.feasibility.feasible},
                     {"on_boundary", e.feasibility.on_boundary}};
            std::cout << out.dump(2) << "\n";
        } else if (*adm) {
            AdmissibilityProblem p;
            if (!matrix_file.empty()) {
                const json j = json::parse(read_file(matrix_file));
                p.matrix = j.at("matrix").get<std::vector<std::vector<double>>>();
                p.target = j.at("target").get<std::vector<double>>();
            } else if (benchmark) {
                p = AdmissibilityProblem::benchmark();
            } else {
                throw CLI::ValidationError("admissible", "give --matrix-file or --benchmark");
            }
            json out = json::array();
            for (const IndexSet& s : enumerate_irreducible(p)) {
                json set = json::array();
                for (const SignedIndex& i : s) set.push_back({{"sign", i.sign}, {"spring", i.spring}});
                out.push_back(set);
            }
            std::cout << out.dump(2) << "\n";
        } else if (*st) {
            std::cout << result_json(max_strength(domain_arg(domain_text), cost_cap)).dump(2) << "\n";
        } else if (*opt) {
            SweepConfig cfg;
            cfg.methods = method_arg(method_text);
            cfg.rs_starts = rs_starts;
            const StudyId id = study_arg(study_text);
            const PlasticDomain d = domain_arg(domain_text);
            json out = result_json(solve_instance(id, k1, k2, d, cfg, seed));
            out["study"] = std::string(to_string(id));
            out["domain"] = std::string(to_string(d));
            out["k1"] = k1;
            out["k2"] = k2;
            std::cout << out.dump(2) << "\n";
        } else if (*sw) {
            const StudyId id = study_arg(study_text);
            StudySpec spec = fine ? StudySpec::fine(id) : StudySpec::standard(id);
            if (!grid_text.empty()) spec.k1 = spec.k2 = GridAxis::parse(grid_text);
            if (!grid_k2_text.empty()) spec.k2 = GridAxis::parse(grid_k2_text);
            spec.domains = domains_arg(domains_text);
            SweepConfig cfg;
            cfg.methods = method_arg(method_text);
            cfg.rs_starts = rs_starts;
            cfg.threads = threads;
            const SweepReport report = classify_cells(run_study(spec, cfg, seed));
            const std::string text = to_json(report);
            if (out_path.empty()) {
                std::cout << text << "\n";
            } else {
                write_file(out_path, text);
            }
            if (!csv_path.empty()) write_file(csv_path, to_csv(report));
        } else if (*rep) {
            const SweepReport report = from_json(read_file(in_path));
            PlotSpec spec;
            spec.radius_metric = radius_text == "cost" ? RadiusMetric::Cost : RadiusMetric::Value;
            spec.title = title;
            if (!threshold_text.empty()) {
                const auto [a, b] = class_pair(threshold_text);
                const ThresholdFit fit = detect_threshold(report, a, b);
                spec.thresholds.push_back(fit);
                std::cout << json{{"threshold", threshold_json(fit)}}.dump() << "\n";
            }
            if (!svg_path.empty()) emit_svg(report, spec, svg_path);
            if (!csv_path.empty()) write_file(csv_path, to_csv(report));
            if (!exceptions_path.empty()) write_file(exceptions_path, exceptions_markdown(find_exceptions(report)));
        } else if (*ver) {
            std::vector<SweepReport> reports;
            for (const std::string& path : inputs) reports.push_back(from_json(read_file(path)));
            int failed = 0;
            for (const ClauseCheck& c : verify_propositions(reports)) {
                std::printf("%-13s %-13s %s\n", c.id.c_str(), std::string(to_string(c.status)).c_str(),
                            c.detail.c_str());
                if (c.status == ClauseStatus::Fail) ++failed;
            }
            return failed == 0 ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
