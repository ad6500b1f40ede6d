#pragma once

// Subcommands of the outflow tool. Each writes its artifacts, a resolved
// config and summary.json (pass/fail per check) into the output directory.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "outflow/config.hpp"

namespace outflow::commands {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Outcome {
    std::vector<Check> checks;
    nlohmann::json summary;

    bool passed() const;
};

struct Options {
    bool sweep_regimes = false;
};

std::vector<std::string> names();

/// Runs `command` with artifacts under cfg.output.dir. Errors propagate as
/// the exception types of errors.hpp.
Outcome dispatch(const std::string& command, config::RunConfig cfg, const Options& options = {});

/// Profile for the configured far field: transonic from y10, otherwise from
/// eps. Fills cfg.stationary.L with the length actually used.
stationary::StationaryProfile build_profile(config::RunConfig& cfg);

} // namespace outflow::commands
