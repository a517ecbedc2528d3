#pragma once

// The acceptance sweep, shared by the CLI and the acceptance test binary.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "polyhom/polygroupoid.hpp"

namespace polyhom {

struct SelftestOptions {
    bool quick = false;
    /// Plants a fault into the criterion 2 instances so the sweep must fail.
    bool inject_fault = false;
    std::uint64_t seed = 1;
    /// Empty runs every criterion.
    std::vector<int> only;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    double seconds = 0;
    double limit_seconds = 0;
    std::string detail;
    nlohmann::json witness;

    /// Timings are left out with timing = false so the line is reproducible.
    std::string line(bool timing = true) const;
    nlohmann::json to_json() const;
};

CriterionResult run_criterion(int id, const SelftestOptions& options);
std::vector<CriterionResult> run_selftest(const SelftestOptions& options);
bool all_passed(const std::vector<CriterionResult>& results);

/// Adds a second Q filler to the first horn of H.
Polygroupoid plant_horn_duplicate(const Polygroupoid& H);
/// Standard model whose Q over the first (n+1)-configuration asks the
/// alternating sum to be a fixed nonzero element instead of 0.
Polygroupoid plant_non_associative(const FinAbelianGroup& G, std::size_t vertex_count, std::size_t n);

}  // namespace polyhom
