#include "springnet/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "springnet/simplex.hpp"

namespace springnet {

void AdmissibilityProblem::validate() const {
    if (matrix.size() != target.size()) {
        throw std::invalid_argument("matrix row count must equal target length");
    }
    const std::size_t m = springs();
    for (const auto& row : matrix) {
        if (row.size() != m) throw std::invalid_argument("ragged admissibility matrix");
    }
}

std::vector<double> AdmissibilityProblem::generator(SignedIndex idx) const {
    if (idx.spring < 1 || static_cast<std::size_t>(idx.spring) > springs()) {
        throw std::out_of_range("spring index out of range");
    }
    if (idx.sign != 1 && idx.sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    std::vector<double> g(matrix.size());
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        g[r] = idx.sign * matrix[r][static_cast<std::size_t>(idx.spring - 1)];
    }
    return g;
}

AdmissibilityProblem AdmissibilityProblem::benchmark() {
    AdmissibilityProblem p;
    p.matrix = {{1, 0, 1, 0, 1}, {0, 0, 1, -1, 1}, {1, -1, 1, 0, 0}};
    p.target = {1, 0, 0};
    return p;
}

bool cone_member(std::span<const double> target, const std::vector<std::vector<double>>& generators,
                 double tol) {
    const std::size_t dim = target.size();
    for (const auto& g : generators) {
        if (g.size() != dim) throw std::invalid_argument("generator dimension mismatch");
    }
    if (generators.empty()) {
        return std::all_of(target.begin(), target.end(), [tol](double v) { return std::abs(v) <= tol; });
    }
    StandardFormLp lp;
    lp.cost.assign(generators.size(), 0.0);
    lp.a.assign(dim, std::vector<double>(generators.size()));
    lp.b.assign(target.begin(), target.end());
    for (std::size_t k = 0; k < generators.size(); ++k) {
        for (std::size_t r = 0; r < dim; ++r) lp.a[r][k] = generators[k][r];
    }
    return solve_standard_form(lp, tol).status == LpStatus::Optimal;
}

bool is_admissible(const AdmissibilityProblem& problem, const IndexSet& set, double tol) {
    std::vector<std::vector<double>> gens;
    gens.reserve(set.size());
    for (SignedIndex idx : set) gens.push_back(problem.generator(idx));
    return cone_member(problem.target, gens, tol);
}

namespace {

bool contains_all(const IndexSet& super, const IndexSet& sub) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

}  // namespace

std::vector<IndexSet> enumerate_irreducible(const AdmissibilityProblem& problem) {
    problem.validate();
    const int m = static_cast<int>(problem.springs());

    std::vector<SignedIndex> candidates;
    for (int j = 1; j <= m; ++j) {
        candidates.push_back({-1, j});
        candidates.push_back({1, j});
    }
    const std::size_t total = candidates.size();

    std::vector<IndexSet> found;
    std::vector<std::size_t> pick;
    for (std::size_t k = 0; k <= total; ++k) {
        // Lexicographic k-combinations of candidate positions.
        pick.resize(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            IndexSet set;
            set.reserve(k);
            for (std::size_t i : pick) set.push_back(candidates[i]);
            const bool pruned = std::any_of(found.begin(), found.end(),
                                            [&](const IndexSet& f) { return contains_all(set, f); });
            if (!pruned && is_admissible(problem, set)) found.push_back(set);

            std::size_t i = k;
            while (i > 0 && pick[i - 1] == total - k + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const IndexSet& a, const IndexSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return found;
}

std::string to_string(const IndexSet& set) {
    std::string s = "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) s += ",";
        s += "(";
        s += set[i].sign > 0 ? "+" : "-";
        s += ",";
        s += std::to_string(set[i].spring);
        s += ")";
    }
    return s + "}";
}

}  // namespace springnet
