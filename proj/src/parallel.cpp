#include "forge/parallel.hpp"

#include <atomic>

namespace forge {

namespace {
std::atomic<int> g_jobs{1};
}

int jobs() { return g_jobs.load(); }

void set_jobs(int n) {
    if (n <= 0) n = std::max(1u, std::thread::hardware_concurrency());
    g_jobs.store(n);
}

}  // namespace forge
