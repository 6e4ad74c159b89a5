#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace springnet {

/// A pair (sign, spring) with sign in {+1,-1} and spring in 1..m.
struct SignedIndex {
    int sign = 1;
    int spring = 1;

    // Ordered by spring, then sign.
    friend std::strong_ordering operator<=>(const SignedIndex& a, const SignedIndex& b) {
        if (auto c = a.spring <=> b.spring; c != 0) return c;
        return a.sign <=> b.sign;
    }
    friend bool operator==(const SignedIndex&, const SignedIndex&) = default;
};

/// Kept sorted by (spring, sign).
using IndexSet = std::vector<SignedIndex>;

/// Cone inclusion target in cone{ sign * M e_spring : (sign, spring) in I0 }.
struct AdmissibilityProblem {
    std::vector<std::vector<double>> matrix;  // rows x m
    std::vector<double> target;

    std::size_t springs() const { return matrix.empty() ? 0 : matrix.front().size(); }
    void validate() const;

    /// Generator sign * (column `spring` of matrix).
    std::vector<double> generator(SignedIndex idx) const;

    /// The 3x5 matrix of the five-spring bridge with target (1,0,0).
    static AdmissibilityProblem benchmark();
};

/// True iff target = sum_k lambda_k g_k for some lambda >= 0, decided by a
/// phase-one simplex. An empty generator list admits only the zero target.
bool cone_member(std::span<const double> target, const std::vector<std::vector<double>>& generators,
                 double tol = 1e-9);

/// True iff the generators of `set` contain the target in their cone.
bool is_admissible(const AdmissibilityProblem& problem, const IndexSet& set, double tol = 1e-9);

/// All admissible sets none of whose proper subsets is admissible, found by
/// increasing cardinality with superset pruning. Sorted by size, then
/// lexicographically.
std::vector<IndexSet> enumerate_irreducible(const AdmissibilityProblem& problem);

/// "{(+,1),(-,3),(+,5)}"
std::string to_string(const IndexSet& set);

}  // namespace springnet
