#pragma once

// Brute-force references used by the unit and acceptance tests. None of these
// call into the library's solvers.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

struct Edge {
    std::size_t a, b;
    double g;
};

namespace detail {

inline std::size_t find(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

// Calls visit(weight, parent) for every forest with exactly `components`
// components over n nodes, built from edge subsets of size n - components.
inline void forests(const std::vector<Edge>& edges, std::size_t n, std::size_t components,
                    const std::function<void(double, std::vector<std::size_t>&)>& visit) {
    const std::size_t m = edges.size();
    const std::size_t k = n - components;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
        std::vector<std::size_t> parent(n);
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
        double w = 1.0;
        bool acyclic = true;
        for (std::size_t e = 0; e < m && acyclic; ++e) {
            if (!(mask >> e & 1u)) continue;
            const std::size_t ra = find(parent, edges[e].a), rb = find(parent, edges[e].b);
            if (ra == rb) acyclic = false;
            parent[ra] = rb;
            w *= edges[e].g;
        }
        if (acyclic) visit(w, parent);
    }
}

}  // namespace detail

// Effective resistance between s and t: weighted spanning 2-forests that split
// s from t over weighted spanning trees. +inf when no spanning tree has weight.
inline double forest_resistance(const std::vector<Edge>& edges, std::size_t n, std::size_t s, std::size_t t) {
    double trees = 0.0, split = 0.0;
    detail::forests(edges, n, 1, [&](double w, std::vector<std::size_t>&) { trees += w; });
    detail::forests(edges, n, 2, [&](double w, std::vector<std::size_t>& parent) {
        if (detail::find(parent, s) != detail::find(parent, t)) split += w;
    });
    if (trees == 0.0) return std::numeric_limits<double>::infinity();
    return split / trees;
}

// The five-spring bridge, nodes 0..3, terminals 0 and 3.
inline std::vector<Edge> bridge(const std::array<double, 5>& c) {
    return {{0, 1, c[0]}, {0, 2, c[1]}, {1, 2, c[2]}, {1, 3, c[3]}, {2, 3, c[4]}};
}

// Caratheodory: target lies in the cone of the generators iff it is a
// nonnegative combination of some linearly independent subset.
inline bool cone_member(const std::vector<double>& target, const std::vector<std::vector<double>>& gens,
                        double tol = 1e-9) {
    const std::size_t dim = target.size();
    Eigen::VectorXd b(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) b[static_cast<Eigen::Index>(i)] = target[i];
    if (b.norm() <= tol) return true;
    const std::size_t m = gens.size();
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        const int k = __builtin_popcount(mask);
        if (static_cast<std::size_t>(k) > dim) continue;
        Eigen::MatrixXd a(static_cast<Eigen::Index>(dim), k);
        int col = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (!(mask >> j & 1u)) continue;
            for (std::size_t i = 0; i < dim; ++i) a(static_cast<Eigen::Index>(i), col) = gens[j][i];
            ++col;
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        if (qr.rank() < k) continue;
        const Eigen::VectorXd x = qr.solve(b);
        if ((a * x - b).norm() <= tol && x.minCoeff() >= -tol) return true;
    }
    return false;
}

struct Vertex {
    std::vector<double> x;
    double value;
};

// max objective . x over { x >= 0, rows x <= bounds } by enumerating every
// basic feasible solution. Returns nullopt when there is none.
inline std::optional<Vertex> lp_by_vertices(const std::vector<double>& objective,
                                            const std::vector<std::vector<double>>& rows,
                                            const std::vector<double>& bounds, double tol = 1e-9,
                                            std::vector<Vertex>* all = nullptr) {
    const std::size_t n = objective.size();
    const std::size_t m = rows.size() + n;
    auto row = [&](std::size_t i, std::size_t j) -> double {
        if (i < rows.size()) return rows[i][j];
        return i - rows.size() == j ? -1.0 : 0.0;
    };
    auto bound = [&](std::size_t i) { return i < rows.size() ? bounds[i] : 0.0; };
    std::optional<Vertex> best;
    std::vector<std::size_t> pick(n);
    for (std::size_t i = 0; i < n; ++i) pick[i] = i;
    if (n > m) return best;
    while (true) {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        Eigen::VectorXd b(static_cast<Eigen::Index>(n));
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = row(pick[r], j);
            b[static_cast<Eigen::Index>(r)] = bound(pick[r]);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (lu.rank() == static_cast<Eigen::Index>(n)) {
            const Eigen::VectorXd x = lu.solve(b);
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += row(i, j) * x[static_cast<Eigen::Index>(j)];
                ok = s <= bound(i) + tol;
            }
            if (ok) {
                Vertex v{std::vector<double>(x.data(), x.data() + n), 0.0};
                for (std::size_t j = 0; j < n; ++j) v.value += objective[j] * v.x[j];
                if (all) all->push_back(v);
                if (!best || v.value > best->value) best = v;
            }
        }
        std::size_t i = n;
        while (i > 0 && pick[i - 1] == m - n + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

}  // namespace oracle
