#pragma once

#include <map>
#include <string>
#include <vector>

#include "springnet/sweep.hpp"
#include "springnet/threshold.hpp"

namespace springnet {

// JSON: {"study", "master_seed", "cells": [{k1, k2, domain, c[5], F, R, G,
// C, value, label, cluster, ...}]}. R is null for a disconnected network.
std::string to_json(const SweepReport& report, int indent = 2);
/// Throws std::invalid_argument on malformed input.
SweepReport from_json(const std::string& text);

/// One CSV line of a report.
struct TableRow {
    double k1 = 0.0;
    double k2 = 0.0;
    PlasticDomain domain = PlasticDomain::D135;
    SpringSet c;
    double F = 0.0;
    double R = 0.0;
    double G = 0.0;
    double C = 0.0;
    double value = 0.0;
    std::string label;
    int cluster = -1;
};

inline constexpr const char* kCsvHeader = "k1,k2,domain,c1,c2,c3,c4,c5,F,R,G,C,value,label,cluster";

std::vector<TableRow> table_rows(const SweepReport& report);
/// RFC 4180 with CRLF line ends; reals at 10 significant digits.
std::string to_csv(const SweepReport& report);
/// Inverse of to_csv. Throws std::invalid_argument on malformed input.
std::vector<TableRow> parse_csv(const std::string& text);

enum class RadiusMetric { Value, Cost };

struct PlotSpec {
    double radius_scale = 0.9;  // largest disc fills this fraction of half a grid step
    RadiusMetric radius_metric = RadiusMetric::Value;
    std::map<std::string, std::string> colors = default_colors();
    // Axis ranges; derived from the grid when lo >= hi.
    double k1_lo = 0.0, k1_hi = 0.0;
    double k2_lo = 0.0, k2_hi = 0.0;
    std::vector<ThresholdFit> thresholds;
    std::string title;

    static std::map<std::string, std::string> default_colors();
    void validate() const;
};

/// One disc per grid cell, drawn from the cell's best row. Throws
/// std::invalid_argument when a label has no color.
std::string render_svg(const SweepReport& report, const PlotSpec& spec = {});
void emit_svg(const SweepReport& report, const PlotSpec& spec, const std::string& path);

/// Rows with C > 1.5 although c3 = 0 (c3 <= c3_tol).
struct ExceptionRow {
    double k1 = 0.0;
    double k2 = 0.0;
    PlasticDomain domain = PlasticDomain::D135;
    SpringSet c;
    double F = 0.0;
    double R = 0.0;
    double C = 0.0;
};

std::vector<ExceptionRow> find_exceptions(const SweepReport& report, double cost_tol = 0.01,
                                          double c3_tol = 0.02);
/// One markdown table per domain with columns (k1,k2), c, F, R, C.
std::string exceptions_markdown(const std::vector<ExceptionRow>& rows);

/// Writes the CSV to `csv_path` and the exceptions table to `markdown_path`.
void emit_tables(const SweepReport& report, const std::string& csv_path, const std::string& markdown_path);

}  // namespace springnet
