#pragma once

#include <limits>
#include <string>
#include <vector>

namespace lrdoa {

struct SelftestOptions {
    /// Test hook: when finite, every recursion check runs with this
    /// forgetting factor instead of its own.
    double alpha_override = std::numeric_limits<double>::quiet_NaN();
};

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fixed-seed oracle checks: tracked-inverse fidelity against direct
/// inversion, constraint satisfaction, segment identity, D = 1 equivalence,
/// FBA persymmetry and friends.
std::vector<SelftestCheck> run_selftest(const SelftestOptions& options = {});

} // namespace lrdoa
