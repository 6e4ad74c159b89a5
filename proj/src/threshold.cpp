#include "springnet/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "springnet/simplex.hpp"

namespace springnet {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Monotone chain, counter-clockwise, collinear points dropped.
std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

struct Segment {
    Point2 a, b;
};

std::vector<Segment> edges(const std::vector<Point2>& hull) {
    if (hull.size() == 1) return {{hull[0], hull[0]}};
    if (hull.size() == 2) return {{hull[0], hull[1]}};
    std::vector<Segment> out;
    for (std::size_t i = 0; i < hull.size(); ++i) out.push_back({hull[i], hull[(i + 1) % hull.size()]});
    return out;
}

Point2 closest_on(const Segment& s, const Point2& p) {
    const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return s.a;
    const double t = std::clamp(((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2, 0.0, 1.0);
    return {s.a.x + t * dx, s.a.y + t * dy};
}

double dist2(const Point2& p, const Point2& q) {
    return (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
}

// Writes the line w . (x - m) = 0 into fit; `a_sign` is the sign of w . (a - m)
// for class a.
void set_line(ThresholdFit& fit, double wx, double wy, double mx, double my, double a_sign) {
    const double norm = std::hypot(wx, wy);
    if (std::abs(wy) <= 1e-12 * norm) {
        fit.vertical = true;
        fit.k1_intercept = mx;
        fit.slope = 0.0;
        fit.intercept = 0.0;
        fit.a_above = a_sign * wx > 0.0;
    } else {
        fit.vertical = false;
        fit.slope = -wx / wy;
        fit.intercept = my - fit.slope * mx;
        fit.a_above = a_sign * wy > 0.0;
    }
}

// min ||w||_1 + penalty * sum(xi)  s.t.  y_i (w . p_i + b) >= 1 - xi_i.
ThresholdFit soft_margin(std::span<const Point2> a, std::span<const Point2> b) {
    const std::size_t n = a.size() + b.size();
    const std::size_t vars = 6 + n;  // w+x w-x w+y w-y b+ b- xi...
    constexpr double kPenalty = 100.0;
    std::vector<double> cost(vars, 0.0);
    for (std::size_t j = 0; j < 4; ++j) cost[j] = 1.0;
    for (std::size_t i = 0; i < n; ++i) cost[6 + i] = kPenalty;
    std::vector<LpConstraint> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const bool in_a = i < a.size();
        const Point2& p = in_a ? a[i] : b[i - a.size()];
        const double y = in_a ? 1.0 : -1.0;
        std::vector<double> r(vars, 0.0);
        r[0] = -y * p.x;
        r[1] = y * p.x;
        r[2] = -y * p.y;
        r[3] = y * p.y;
        r[4] = -y;
        r[5] = y;
        r[6 + i] = -1.0;
        rows.push_back({std::move(r), -1.0});
    }
    const LpSolution sol = simplex_lp(cost, rows, Sense::Minimize);
    ThresholdFit fit;
    fit.separable = false;
    fit.margin = 0.0;
    const double wx = sol.vertex[0] - sol.vertex[1];
    const double wy = sol.vertex[2] - sol.vertex[3];
    const double bias = sol.vertex[4] - sol.vertex[5];
    if (sol.status != LpStatus::Optimal || std::hypot(wx, wy) < 1e-12) {
        double mean = 0.0;
        for (const Point2& p : a) mean += p.y;
        for (const Point2& p : b) mean += p.y;
        fit.intercept = mean / static_cast<double>(n);
        return fit;
    }
    // A point on the line w . x + b = 0.
    const double s = -bias / (wx * wx + wy * wy);
    set_line(fit, wx, wy, s * wx, s * wy, 1.0);
    return fit;
}

}  // namespace

double ThresholdFit::side(double k1, double k2) const {
    return vertical ? k1 - k1_intercept : k2 - (slope * k1 + intercept);
}

ThresholdFit max_margin_line(std::span<const Point2> a, std::span<const Point2> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("threshold fit needs two nonempty classes");
    const std::vector<Segment> ea = edges(convex_hull({a.begin(), a.end()}));
    const std::vector<Segment> eb = edges(convex_hull({b.begin(), b.end()}));

    double best = std::numeric_limits<double>::infinity();
    Point2 p{}, q{};
    auto consider = [&](const Point2& u, const Point2& v) {
        const double d = dist2(u, v);
        if (d < best) {
            best = d;
            p = u;
            q = v;
        }
    };
    for (const Segment& sa : ea) {
        for (const Segment& sb : eb) {
            consider(sa.a, closest_on(sb, sa.a));
            consider(sa.b, closest_on(sb, sa.b));
            consider(closest_on(sa, sb.a), sb.a);
            consider(closest_on(sa, sb.b), sb.b);
        }
    }

    const double wx = q.x - p.x, wy = q.y - p.y;
    const double mx = 0.5 * (p.x + q.x), my = 0.5 * (p.y + q.y);
    const double norm = std::hypot(wx, wy);
    bool separates = norm > 1e-12;
    // Crossing edges or nested hulls leave the bisector without a clean split.
    const double eps = 1e-12 * std::max(1.0, norm);
    for (const Point2& u : a) separates = separates && wx * (u.x - mx) + wy * (u.y - my) < -eps;
    for (const Point2& u : b) separates = separates && wx * (u.x - mx) + wy * (u.y - my) > eps;
    if (!separates) return soft_margin(a, b);

    ThresholdFit fit;
    fit.separable = true;
    fit.margin = 0.5 * norm;
    set_line(fit, wx, wy, mx, my, -1.0);
    return fit;
}

ThresholdFit detect_threshold(const SweepReport& report, std::string_view class_a, std::string_view class_b) {
    std::vector<Point2> a, b;
    for (const SweepCell& cell : group_cells(report)) {
        if (cell.label == class_a) a.push_back({cell.k1, cell.k2});
        if (cell.label == class_b) b.push_back({cell.k1, cell.k2});
    }
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("need cells of both classes '" + std::string(class_a) + "' and '" +
                                    std::string(class_b) + "'");
    }
    return max_margin_line(a, b);
}

}  // namespace springnet
