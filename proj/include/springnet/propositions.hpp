#pragma once

#include <span>
#include <string>
#include <vector>

#include "springnet/sweep.hpp"

namespace springnet {

enum class ClauseStatus { Pass, Fail, NotEvaluated };

std::string_view to_string(ClauseStatus s);

struct ClauseCheck {
    std::string id;      // e.g. "B.uniform"
    std::string clause;  // one-line statement of what is checked
    ClauseStatus status = ClauseStatus::NotEvaluated;
    std::string detail;
};

/// Checks the claims about studies A-D that can be read off labeled sweep
/// reports. Every clause is always listed; clauses whose study is missing
/// from `reports` are NotEvaluated. Reports must already be classified.
std::vector<ClauseCheck> verify_propositions(std::span<const SweepReport> reports);

}  // namespace springnet
