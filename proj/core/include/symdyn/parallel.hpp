#pragma once

#include <cstddef>
#include <functional>

namespace symdyn {

// Process-wide worker count for internal parallel loops (default 1).
void set_thread_count(std::size_t n);
std::size_t thread_count();

// Runs body(i) for i in [0, count). Work is split by index only, so callers that
// store per-index results and reduce them in index order get thread-count
// independent output.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace symdyn
