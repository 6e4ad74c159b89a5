#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "springnet/spring_set.hpp"

namespace springnet {

// Springs conduct current with resistance 1/c_i. All functions here are pure.

struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    double conductance = 0.0;
};

struct ResistorNetwork {
    std::size_t node_count = 0;
    std::vector<Edge> edges;
    std::size_t source = 0;
    std::size_t sink = 0;

    /// Throws std::invalid_argument when node ids, terminals or conductances
    /// are out of range.
    void validate() const;
};

/// Raised when the node-potential system is singular even though the
/// terminals are connected (loss of precision, not disconnection).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Equivalent resistance between nodes 1 and 4 with denominators cleared.
/// Returns +infinity when the terminals are disconnected.
double resistance(const SpringSet& c);

/// 1 / resistance(c), or 0 for a disconnected pair.
double conductance(const SpringSet& c);

/// A variant closed form whose denominator
/// lacks the c1*c3*(c4+c5) term, so it only agrees with resistance() when
/// c1*c3 == 0. Kept for comparison.
double resistance_printed(const SpringSet& c);

/// True when resistance_printed() and resistance() differ by more than
/// rel_tol (relative).
bool printed_form_disagrees(const SpringSet& c, double rel_tol = 1e-12);

/// Equivalent resistance by the junction law: sink grounded, source held at
/// unit potential, remaining potentials from the reduced Laplacian.
/// Returns +infinity when source and sink are not connected through
/// positive conductances. Throws NumericalError on a singular connected
/// system.
double solve_network(const ResistorNetwork& net);

/// The five-spring bridge as a resistor network (nodes 0..3, source 0,
/// sink 3).
ResistorNetwork bridge_network(const SpringSet& c);

}  // namespace springnet
