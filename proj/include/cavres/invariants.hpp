// invariants.hpp: seeded property suites over every module, run by `check`.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cavres {

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::size_t checks = 0;
    /// Largest observed value / tolerance over all checks (<= 1 when passing).
    double worst_ratio = 0.0;
    /// Label of the first failing check, empty when passing.
    std::string failure;
};

/// Runs the qmath, states, measures, dynamics and reservoir suites. `samples`
/// random parameter draws are used per sampled property. Every tolerance is
/// multiplied by `tolerance_scale`; a non-positive scale makes every check
/// fail, which exercises the failure path.
std::vector<SuiteResult> run_invariant_suites(std::uint64_t seed, std::size_t samples, double tolerance_scale = 1.0);

}  // namespace cavres
