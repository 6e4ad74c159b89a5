#include "springnet/spring_set.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace springnet {

double SpringSet::cost() const {
    double sum = 0.0;
    for (double v : c) sum += v;
    return sum;
}

void require_valid(const SpringSet& c) {
    for (std::size_t i = 0; i < kSpringCount; ++i) {
        if (!std::isfinite(c[i]) || c[i] < 0.0) {
            throw std::domain_error("elastic limit c" + std::to_string(i + 1) +
                                    " must be finite and >= 0");
        }
    }
}

double max_abs_diff(const SpringSet& a, const SpringSet& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < kSpringCount; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

SpringSet parse_spring_set(std::string_view text) {
    SpringSet out;
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string field(text.substr(pos, comma - pos));
        if (count >= kSpringCount) throw std::invalid_argument("expected exactly 5 values");
        char* end = nullptr;
        double v = std::strtod(field.c_str(), &end);
        if (field.empty() || end != field.c_str() + field.size()) {
            throw std::invalid_argument("not a number: '" + field + "'");
        }
        out[count++] = v;
        pos = comma + 1;
    }
    if (count != kSpringCount) throw std::invalid_argument("expected exactly 5 values");
    return out;
}

std::string to_string(const SpringSet& c) {
    std::string s = "(";
    char buf[32];
    for (std::size_t i = 0; i < kSpringCount; ++i) {
        std::snprintf(buf, sizeof buf, "%.4g", c[i]);
        s += buf;
        s += (i + 1 < kSpringCount) ? "," : ")";
    }
    return s;
}

}  // namespace springnet
