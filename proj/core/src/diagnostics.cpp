#include "volflow/diagnostics.hpp"

#include <mutex>

namespace volflow {

namespace {
std::mutex g_mutex;
std::vector<std::string> g_warnings;
std::size_t g_dropped = 0;
constexpr std::size_t kKeep = 256;
}  // namespace

void record_warning(std::string message) {
    std::lock_guard lock(g_mutex);
    if (g_warnings.size() < kKeep)
        g_warnings.push_back(std::move(message));
    else
        ++g_dropped;
}

std::vector<std::string> drain_warnings() {
    std::lock_guard lock(g_mutex);
    std::vector<std::string> out;
    out.swap(g_warnings);
    if (g_dropped > 0) out.push_back(std::to_string(g_dropped) + " further warnings dropped");
    g_dropped = 0;
    return out;
}

std::size_t warning_count() {
    std::lock_guard lock(g_mutex);
    return g_warnings.size() + g_dropped;
}

}  // namespace volflow
