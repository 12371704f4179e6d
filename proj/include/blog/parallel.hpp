#pragma once

#include <cstddef>
#include <functional>

namespace blog {

// Worker count: BLOG_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t default_threads();

// Calls body(i) for i in [0, count) on up to `threads` workers (0 means
// default_threads()). Indices are handed out in increasing order; callers
// write results into slot i so assembly is independent of scheduling. The
// first exception thrown by a body is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace blog
