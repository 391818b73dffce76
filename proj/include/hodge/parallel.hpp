#pragma once

#include <cstddef>
#include <functional>

namespace hodge {

/// Worker count used by the grid scans (default 1).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls f(i) for i in [0, n); indices are handed out in order, results land wherever f writes them.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace hodge
