#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace ivlab {

// One inequality instance lhs <= rhs (or an identity lhs == rhs) and its verdict.
struct Check {
    std::string id;
    bool pass;
    double lhs;
    double rhs;
};

inline bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace ivlab
