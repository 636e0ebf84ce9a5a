#pragma once

#include "fsum/tables.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fsum {

struct CriterionInfo {
    int id = 0;
    std::string key;
    std::string title;
};

struct CriterionOutcome {
    CriterionInfo info;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
    Table artifact; // the compared numbers, written as <key>.csv by the CLI
};

struct ValidationOptions {
    std::uint64_t seed = 1;
    std::vector<std::string> only; // keys or ids; empty runs everything
    unsigned threads = 0;
};

const std::vector<CriterionInfo>& criteria();

// Runs the selected criteria in id order; on_result sees each outcome as it finishes.
std::vector<CriterionOutcome> run_validation(const ValidationOptions& opts,
                                             const std::function<void(const CriterionOutcome&)>& on_result = {});

// Fig. 8 style capacity sweep used by the ordering criterion and the figure config.
SweepConfig capacity_comparison_config(std::uint64_t seed);

} // namespace fsum
