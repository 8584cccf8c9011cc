#pragma once

#include <string>
#include <vector>

namespace volflow {

/// Process-wide warning sink. Truncation and evenness warnings end up here
/// instead of aborting a computation; callers drain them when reporting.
void record_warning(std::string message);
std::vector<std::string> drain_warnings();
std::size_t warning_count();

}  // namespace volflow
