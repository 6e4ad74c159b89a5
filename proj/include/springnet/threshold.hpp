#pragma once

#include <span>
#include <string_view>

#include "springnet/sweep.hpp"

namespace springnet {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Line k2 = slope * k1 + intercept, or k1 = k1_intercept when vertical.
struct ThresholdFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool vertical = false;
    double k1_intercept = 0.0;
    bool separable = false;
    double margin = 0.0;  // half the gap between the classes; 0 if not separable
    bool a_above = true;  // class a lies above (or right of, when vertical) the line

    /// Signed offset of (k1, k2): positive above the line, or right of it
    /// when vertical.
    double side(double k1, double k2) const;
};

/// Maximum-margin separating line of two point sets, from the closest pair
/// of their convex hulls. When the hulls touch or overlap the result is an
/// L1 soft-margin fit with separable = false. Throws std::invalid_argument
/// if either set is empty.
ThresholdFit max_margin_line(std::span<const Point2> a, std::span<const Point2> b);

/// Threshold between the grid cells labeled `class_a` and `class_b`, using
/// the label of each cell's best row.
ThresholdFit detect_threshold(const SweepReport& report, std::string_view class_a, std::string_view class_b);

}  // namespace springnet
