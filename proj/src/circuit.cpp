#include "springnet/circuit.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

namespace springnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Fraction {
    double num;
    double den;
};

// R_eq with R_i = 1/c_i substituted and every denominator cleared.
Fraction bridge_fraction(const SpringSet& s) {
    const double c1 = s[0], c2 = s[1], c3 = s[2], c4 = s[3], c5 = s[4];
    const double num = c3 * c4 + c2 * (c3 + c4) + c3 * c5 + c4 * c5 + c1 * (c2 + c3 + c5);
    const double den = c1 * c4 * c5 + c2 * c4 * c5 + c1 * c2 * (c4 + c5) + c2 * c3 * (c4 + c5) +
                       c1 * c3 * (c4 + c5);
    return {num, den};
}

}  // namespace

void ResistorNetwork::validate() const {
    if (source >= node_count || sink >= node_count) {
        throw std::invalid_argument("terminal node out of range");
    }
    if (source == sink) throw std::invalid_argument("source and sink must differ");
    for (const Edge& e : edges) {
        if (e.a >= node_count || e.b >= node_count) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        if (!std::isfinite(e.conductance) || e.conductance < 0.0) {
            throw std::invalid_argument("edge conductance must be finite and >= 0");
        }
    }
}

double resistance(const SpringSet& c) {
    require_valid(c);
    const Fraction f = bridge_fraction(c);
    // No spanning tree. Both sums vanish, but with node 2 or node 3 cut off a
    // series path may still join the terminals.
    if (f.den == 0.0) {
        if ((c[0] == 0.0 && c[1] == 0.0) || (c[3] == 0.0 && c[4] == 0.0)) return kInf;
        if (c[0] == 0.0 && c[2] == 0.0 && c[3] == 0.0) return 1.0 / c[1] + 1.0 / c[4];
        if (c[1] == 0.0 && c[2] == 0.0 && c[4] == 0.0) return 1.0 / c[0] + 1.0 / c[3];
        return solve_network(bridge_network(c));  // underflow
    }
    return f.num / f.den;
}

double conductance(const SpringSet& c) {
    const double r = resistance(c);
    return std::isinf(r) ? 0.0 : 1.0 / r;
}

double resistance_printed(const SpringSet& s) {
    require_valid(s);
    const double c1 = s[0], c2 = s[1], c3 = s[2], c4 = s[3], c5 = s[4];
    const double num = c3 * c4 + c2 * (c3 + c4) + c3 * c5 + c4 * c5 + c1 * (c2 + c3 + c5);
    const double den = c1 * c4 * c5 + c2 * c4 * c5 + c1 * c2 * (c4 + c5) + c2 * c3 * (c4 + c5);
    if (den == 0.0) return kInf;
    return num / den;
}

bool printed_form_disagrees(const SpringSet& c, double rel_tol) {
    const double a = resistance(c);
    const double b = resistance_printed(c);
    if (std::isinf(a) || std::isinf(b)) return std::isinf(a) != std::isinf(b);
    return std::abs(a - b) > rel_tol * std::max(std::abs(a), std::abs(b));
}

double solve_network(const ResistorNetwork& net) {
    net.validate();
    const std::size_t n = net.node_count;

    // Component of the source over positive-conductance edges.
    std::vector<std::vector<std::size_t>> adj(n);
    for (const Edge& e : net.edges) {
        if (e.conductance > 0.0 && e.a != e.b) {
            adj[e.a].push_back(e.b);
            adj[e.b].push_back(e.a);
        }
    }
    std::vector<bool> reached(n, false);
    std::vector<std::size_t> stack{net.source};
    reached[net.source] = true;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : adj[u]) {
            if (!reached[v]) {
                reached[v] = true;
                stack.push_back(v);
            }
        }
    }
    if (!reached[net.sink]) return kInf;

    // Unknown potentials: reached nodes other than the two terminals.
    std::vector<long> slot(n, -1);
    long unknowns = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (reached[v] && v != net.source && v != net.sink) slot[v] = unknowns++;
    }

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(unknowns, unknowns);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
    auto stamp = [&](std::size_t u, std::size_t v, double g) {
        // Row for node u: g * (V_u - V_v) contributes to the current balance.
        if (slot[u] < 0) return;
        lap(slot[u], slot[u]) += g;
        if (slot[v] >= 0) {
            lap(slot[u], slot[v]) -= g;
        } else if (v == net.source) {
            rhs(slot[u]) += g;  // V_source = 1
        }
    };
    for (const Edge& e : net.edges) {
        if (e.conductance <= 0.0 || e.a == e.b || !reached[e.a]) continue;
        stamp(e.a, e.b, e.conductance);
        stamp(e.b, e.a, e.conductance);
    }

    Eigen::VectorXd potential(unknowns);
    if (unknowns > 0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(lap);
        if (!lu.isInvertible()) {
            throw NumericalError("singular node-potential system with connected terminals");
        }
        potential = lu.solve(rhs);
    }

    auto voltage = [&](std::size_t v) {
        if (v == net.source) return 1.0;
        if (v == net.sink) return 0.0;
        return potential(slot[v]);
    };
    double current = 0.0;
    for (const Edge& e : net.edges) {
        if (e.conductance <= 0.0 || e.a == e.b) continue;
        if (e.a == net.source) current += e.conductance * (1.0 - voltage(e.b));
        if (e.b == net.source) current += e.conductance * (1.0 - voltage(e.a));
    }
    if (!(current > 0.0) || !std::isfinite(current)) {
        throw NumericalError("non-positive source current with connected terminals");
    }
    return 1.0 / current;
}

ResistorNetwork bridge_network(const SpringSet& c) {
    require_valid(c);
    ResistorNetwork net;
    net.node_count = 4;
    net.source = 0;
    net.sink = 3;
    net.edges = {{0, 1, c[0]}, {0, 2, c[1]}, {1, 2, c[2]}, {1, 3, c[3]}, {2, 3, c[4]}};
    return net;
}

}  // namespace springnet
