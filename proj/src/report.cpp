#include "springnet/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace springnet {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_real(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_null()) return kInf;
    if (!v.is_number()) throw std::invalid_argument(std::string("field '") + key + "' is not a number");
    return v.get<double>();
}

std::string real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                field += ch;
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
            any = true;
        } else if (ch == ',') {
            record.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (ch == '\r' || ch == '\n') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                record.push_back(std::move(field));
                records.push_back(std::move(record));
            }
            record.clear();
            field.clear();
            any = false;
        } else {
            field += ch;
            any = true;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
    if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

double parse_real(const std::string& s) {
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number '" + s + "' in CSV");
    }
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "' in CSV");
    return v;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string to_json(const SweepReport& report, int indent) {
    json cells = json::array();
    for (const SweepRow& row : report.rows) {
        const OptResult& r = row.result;
        json c = json::array();
        for (double x : r.c_star.c) c.push_back(x);
        cells.push_back({
            {"k1", row.k1},
            {"k2", row.k2},
            {"domain", std::string(to_string(row.domain))},
            {"c", c},
            {"F", r.F},
            {"R", number_or_null(r.R)},
            {"G", r.G},
            {"C", r.C},
            {"value", number_or_null(r.value)},
            {"merit", number_or_null(r.merit)},
            {"label", row.label},
            {"cluster", row.cluster},
            {"feasible", r.feasible},
            {"max_violation", number_or_null(r.max_violation)},
            {"total_violation", number_or_null(r.total_violation)},
            {"method", std::string(to_string(r.method))},
            {"seed", r.seed},
            {"iterations", r.iterations},
        });
    }
    json doc = {
        {"study", std::string(to_string(report.study))},
        {"master_seed", report.master_seed},
        {"cells", cells},
    };
    return doc.dump(indent) + "\n";
}

SweepReport from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        SweepReport report;
        const auto study = parse_study(doc.at("study").get<std::string>());
        if (!study) throw std::invalid_argument("unknown study in report");
        report.study = *study;
        report.master_seed = doc.at("master_seed").get<std::uint64_t>();
        for (const json& cell : doc.at("cells")) {
            SweepRow row;
            row.k1 = cell.at("k1").get<double>();
            row.k2 = cell.at("k2").get<double>();
            const auto domain = parse_domain(cell.at("domain").get<std::string>());
            if (!domain) throw std::invalid_argument("unknown domain in report");
            row.domain = *domain;
            const json& c = cell.at("c");
            if (!c.is_array() || c.size() != kSpringCount) throw std::invalid_argument("c must have 5 entries");
            OptResult& r = row.result;
            for (std::size_t j = 0; j < kSpringCount; ++j) r.c_star[j] = c[j].get<double>();
            r.F = read_real(cell, "F");
            r.R = read_real(cell, "R");
            r.G = read_real(cell, "G");
            r.C = read_real(cell, "C");
            r.value = read_real(cell, "value");
            r.merit = cell.contains("merit") ? read_real(cell, "merit") : r.value;
            row.label = cell.value("label", std::string());
            row.cluster = cell.value("cluster", -1);
            r.feasible = cell.value("feasible", true);
            r.max_violation = cell.contains("max_violation") ? read_real(cell, "max_violation") : 0.0;
            r.total_violation = cell.contains("total_violation") ? read_real(cell, "total_violation") : 0.0;
            const auto method = parse_method(cell.value("method", std::string("de")));
            if (!method) throw std::invalid_argument("unknown method in report");
            r.method = *method;
            r.seed = cell.value("seed", std::uint64_t{0});
            r.iterations = cell.value("iterations", 0);
            report.rows.push_back(std::move(row));
        }
        return report;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed report JSON: ") + e.what());
    }
}

std::vector<TableRow> table_rows(const SweepReport& report) {
    std::vector<TableRow> rows;
    rows.reserve(report.rows.size());
    for (const SweepRow& row : report.rows) {
        const OptResult& r = row.result;
        rows.push_back({row.k1, row.k2, row.domain, r.c_star, r.F, r.R, r.G, r.C, r.value, row.label, row.cluster});
    }
    return rows;
}

std::string to_csv(const SweepReport& report) {
    std::string out = std::string(kCsvHeader) + "\r\n";
    for (const TableRow& t : table_rows(report)) {
        out += real(t.k1) + "," + real(t.k2) + "," + std::string(to_string(t.domain));
        for (double x : t.c.c) out += "," + real(x);
        out += "," + real(t.F) + "," + real(t.R) + "," + real(t.G) + "," + real(t.C) + "," + real(t.value);
        out += "," + csv_field(t.label) + "," + std::to_string(t.cluster) + "\r\n";
    }
    return out;
}

std::vector<TableRow> parse_csv(const std::string& text) {
    const auto records = split_csv(text);
    if (records.empty()) throw std::invalid_argument("CSV has no header");
    std::string header;
    for (std::size_t i = 0; i < records[0].size(); ++i) header += (i ? "," : "") + records[0][i];
    if (header != kCsvHeader) throw std::invalid_argument("unexpected CSV header: " + header);
    std::vector<TableRow> rows;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i];
        if (f.size() != 15) throw std::invalid_argument("CSV record " + std::to_string(i) + " has wrong width");
        TableRow t;
        t.k1 = parse_real(f[0]);
        t.k2 = parse_real(f[1]);
        const auto d = parse_domain(f[2]);
        if (!d) throw std::invalid_argument("unknown domain '" + f[2] + "' in CSV");
        t.domain = *d;
        for (std::size_t j = 0; j < kSpringCount; ++j) t.c[j] = parse_real(f[3 + j]);
        t.F = parse_real(f[8]);
        t.R = parse_real(f[9]);
        t.G = parse_real(f[10]);
        t.C = parse_real(f[11]);
        t.value = parse_real(f[12]);
        t.label = f[13];
        t.cluster = static_cast<int>(parse_real(f[14]));
        rows.push_back(std::move(t));
    }
    return rows;
}

std::map<std::string, std::string> PlotSpec::default_colors() {
    return {
        {"red", "#d62728"},      {"blue", "#1f77b4"},  {"degenerate", "#2ca02c"}, {"uniform", "#1f77b4"},
        {"base", "#d62728"},     {"raised", "#7f7f7f"}, {"infeasible", "#000000"}, {"other", "#9467bd"},
    };
}

void PlotSpec::validate() const {
    if (!(radius_scale > 0.0)) throw std::invalid_argument("radius scale must be > 0");
}

std::string render_svg(const SweepReport& report, const PlotSpec& spec) {
    spec.validate();
    const std::vector<SweepCell> cells = group_cells(report);

    std::vector<double> k1s, k2s;
    for (const SweepCell& c : cells) {
        k1s.push_back(c.k1);
        k2s.push_back(c.k2);
    }
    auto spacing = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        double step = 0.0;
        for (std::size_t i = 1; i < v.size(); ++i) {
            const double d = v[i] - v[i - 1];
            if (step == 0.0 || d < step) step = d;
        }
        return step;
    };
    const double s1 = spacing(k1s), s2 = spacing(k2s);
    double step = std::min(s1 > 0 ? s1 : 0.1, s2 > 0 ? s2 : 0.1);

    double x_lo = spec.k1_lo, x_hi = spec.k1_hi, y_lo = spec.k2_lo, y_hi = spec.k2_hi;
    if (!(x_lo < x_hi)) {
        x_lo = cells.empty() ? 0.0 : *std::min_element(k1s.begin(), k1s.end()) - step;
        x_hi = cells.empty() ? 1.0 : *std::max_element(k1s.begin(), k1s.end()) + step;
    }
    if (!(y_lo < y_hi)) {
        y_lo = cells.empty() ? 0.0 : *std::min_element(k2s.begin(), k2s.end()) - step;
        y_hi = cells.empty() ? 1.0 : *std::max_element(k2s.begin(), k2s.end()) + step;
    }

    constexpr double kSize = 480.0, kPad = 60.0;
    const double plot = kSize - 2.0 * kPad;
    const double sx = plot / (x_hi - x_lo), sy = plot / (y_hi - y_lo);
    auto px = [&](double k1) { return kPad + (k1 - x_lo) * sx; };
    auto py = [&](double k2) { return kSize - kPad - (k2 - y_lo) * sy; };

    auto metric = [&](const SweepCell& c) {
        const OptResult& r = report.rows[c.best_row].result;
        return spec.radius_metric == RadiusMetric::Cost ? r.C : r.value;
    };
    double top = 0.0;
    for (const SweepCell& c : cells) {
        const double m = metric(c);
        if (std::isfinite(m)) top = std::max(top, std::abs(m));
    }
    const double full = 0.5 * step * std::min(sx, sy) * spec.radius_scale;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(kSize) << "\" height=\""
        << fixed(kSize) << "\" viewBox=\"0 0 " << fixed(kSize) << " " << fixed(kSize) << "\">\n"
        << "<defs><clipPath id=\"plot\"><rect x=\"" << fixed(kPad) << "\" y=\"" << fixed(kPad) << "\" width=\""
        << fixed(plot) << "\" height=\"" << fixed(plot) << "\"/></clipPath></defs>\n"
        << "<rect x=\"0.00\" y=\"0.00\" width=\"" << fixed(kSize) << "\" height=\"" << fixed(kSize)
        << "\" fill=\"#ffffff\"/>\n"
        << "<rect x=\"" << fixed(kPad) << "\" y=\"" << fixed(kPad) << "\" width=\"" << fixed(plot) << "\" height=\""
        << fixed(plot) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    if (!spec.title.empty()) {
        svg << "<text x=\"" << fixed(kSize / 2) << "\" y=\"" << fixed(kPad / 2)
            << "\" text-anchor=\"middle\" font-size=\"14\">" << spec.title << "</text>\n";
    }
    svg << "<text x=\"" << fixed(kSize / 2) << "\" y=\"" << fixed(kSize - 15)
        << "\" text-anchor=\"middle\" font-size=\"12\">k1</text>\n"
        << "<text x=\"15.00\" y=\"" << fixed(kSize / 2) << "\" text-anchor=\"middle\" font-size=\"12\">k2</text>\n";

    std::vector<double> ux = k1s, uy = k2s;
    for (auto* v : {&ux, &uy}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    for (double k1 : ux) {
        svg << "<text x=\"" << fixed(px(k1)) << "\" y=\"" << fixed(kSize - kPad + 16)
            << "\" text-anchor=\"middle\" font-size=\"9\">" << fixed(k1) << "</text>\n";
    }
    for (double k2 : uy) {
        svg << "<text x=\"" << fixed(kPad - 6) << "\" y=\"" << fixed(py(k2) + 3)
            << "\" text-anchor=\"end\" font-size=\"9\">" << fixed(k2) << "</text>\n";
    }

    for (const SweepCell& c : cells) {
        const auto color = spec.colors.find(c.label);
        if (color == spec.colors.end()) throw std::invalid_argument("no color for label '" + c.label + "'");
        const double m = metric(c);
        const double r = top > 0.0 && std::isfinite(m) ? full * std::abs(m) / top : full;
        svg << "<circle cx=\"" << fixed(px(c.k1)) << "\" cy=\"" << fixed(py(c.k2)) << "\" r=\"" << fixed(r)
            << "\" fill=\"" << color->second << "\" fill-opacity=\"0.8\" data-label=\"" << c.label << "\"/>\n";
    }

    for (const ThresholdFit& t : spec.thresholds) {
        double x1, y1, x2, y2;
        if (t.vertical) {
            x1 = x2 = t.k1_intercept;
            y1 = y_lo;
            y2 = y_hi;
        } else {
            x1 = x_lo;
            x2 = x_hi;
            y1 = t.slope * x_lo + t.intercept;
            y2 = t.slope * x_hi + t.intercept;
        }
        svg << "<line x1=\"" << fixed(px(x1)) << "\" y1=\"" << fixed(py(y1)) << "\" x2=\"" << fixed(px(x2))
            << "\" y2=\"" << fixed(py(y2)) << "\" stroke=\"#555555\" stroke-width=\"1.50\""
            << (t.separable ? "" : " stroke-dasharray=\"4 3\"") << " clip-path=\"url(#plot)\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_svg(const SweepReport& report, const PlotSpec& spec, const std::string& path) {
    const std::string text = render_svg(report, spec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<ExceptionRow> find_exceptions(const SweepReport& report, double cost_tol, double c3_tol) {
    std::vector<ExceptionRow> rows;
    for (const SweepRow& row : report.rows) {
        const OptResult& r = row.result;
        if (!r.feasible || r.C <= 1.5 + cost_tol || r.c_star[2] > c3_tol) continue;
        rows.push_back({row.k1, row.k2, row.domain, r.c_star, r.F, r.R, r.C});
    }
    return rows;
}

std::string exceptions_markdown(const std::vector<ExceptionRow>& rows) {
    std::string out;
    for (PlasticDomain d : {PlasticDomain::D135, PlasticDomain::D234}) {
        out += "### Domain " + std::string(to_string(d)) + "\n\n";
        out += "| (k1,k2) | (c1,c2,c3,c4,c5) | F | R | C |\n";
        out += "|---|---|---|---|---|\n";
        for (const ExceptionRow& e : rows) {
            if (e.domain != d) continue;
            out += "| (" + fixed(e.k1) + "," + fixed(e.k2) + ") | (";
            for (std::size_t j = 0; j < kSpringCount; ++j) out += (j ? "," : "") + fixed(e.c[j]);
            out += ") | " + fixed(e.F) + " | " + fixed(e.R) + " | " + fixed(e.C) + " |\n";
        }
        out += "\n";
    }
    return out;
}

void emit_tables(const SweepReport& report, const std::string& csv_path, const std::string& markdown_path) {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << to_csv(report);
    std::ofstream md(markdown_path, std::ios::binary);
    if (!md) throw std::runtime_error("cannot write " + markdown_path);
    md << exceptions_markdown(find_exceptions(report));
}

}  // namespace springnet
