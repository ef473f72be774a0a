#pragma once

#include <cstddef>
#include <functional>

namespace regulab {

/// Number of worker threads used by scans. Defaults to the REGULAB_THREADS
/// environment variable, or 1 when unset.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Each index is handled by exactly one worker;
/// callers write into per-index slots and reduce afterwards, so the result does
/// not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace regulab
