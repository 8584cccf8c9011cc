#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "volflow/config.hpp"

namespace volflow::cli {

struct RunOptions {
    std::string out_dir = ".";
    int threads = 1;
    double tol_scale = 1.0;
    std::ostream* log = nullptr;  // progress and summary tables; null = silent
};

struct RunResult {
    int status = 0;                     // 0 iff every assertion held
    std::vector<std::string> files;     // written artifacts
    std::vector<std::string> failures;  // one line per failed assertion
};

const std::vector<std::string>& scenario_names();

/// Runs one scenario. Config problems throw ConfigError; a failed assertion
/// only sets status = 1.
RunResult run_scenario(const std::string& scenario, const Config& cfg, const RunOptions& opt);

}  // namespace volflow::cli
