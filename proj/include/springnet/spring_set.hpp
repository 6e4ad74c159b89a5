#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace springnet {

inline constexpr std::size_t kSpringCount = 5;

/// Elastic limits c1..c5 of the five springs of the bridge network.
///
/// Spring i joins the node pair listed below (nodes numbered 1..4, loading
/// applied between nodes 1 and 4):
///   spring 1: 1-2, spring 2: 1-3, spring 3: 2-3 (bridge), spring 4: 2-4,
///   spring 5: 3-4.
/// Index 0 holds c1.
struct SpringSet {
    std::array<double, kSpringCount> c{};

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    /// Fabrication cost c1 + ... + c5.
    double cost() const;

    friend bool operator==(const SpringSet&, const SpringSet&) = default;
};

/// Throws std::domain_error unless every component is finite and >= 0.
void require_valid(const SpringSet& c);

/// Largest componentwise |a_i - b_i|.
double max_abs_diff(const SpringSet& a, const SpringSet& b);

/// Parses "c1,c2,c3,c4,c5". Throws std::invalid_argument on malformed input.
SpringSet parse_spring_set(std::string_view text);

std::string to_string(const SpringSet& c);

}  // namespace springnet
