#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "irssim/scenario.hpp"

namespace irssim {

inline constexpr const char* kVersion = "1.0.0";

struct ExperimentResult {
    std::string experiment;
    std::uint64_t seed = 0;
    std::string config_digest;
    // extra metadata key=value pairs carried on the '#' line
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    using Cell = std::variant<long long, double, std::string>;
    std::vector<std::vector<Cell>> rows;
};

// Registered experiment ids, stable order.
const std::vector<std::string>& experiment_ids();
bool is_experiment(const std::string& id);

// Throws ConfigError when the scenario lacks a block the experiment needs.
void validate_for_experiment(const std::string& id, const Scenario& s);

// Deterministic: a given (id, scenario, seed) always produces the same
// table, independent of how trials are scheduled (per-trial streams are
// derived from the seed and reduced in index order).
ExperimentResult run_experiment(const std::string& id, const Scenario& s,
                                std::uint64_t seed);

}  // namespace irssim
