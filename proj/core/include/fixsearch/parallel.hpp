#pragma once

#include <cstdint>
#include <functional>

namespace fixsearch {

/// Caps worker parallelism process-wide. 1 disables threading.
void set_max_threads(int n);
int max_threads();

/// Runs body(begin, end) over disjoint chunks of [0, n), possibly on
/// worker threads. Callers must only write to index-disjoint output, so the
/// result is identical for every thread count.
void parallel_chunks(int64_t n, const std::function<void(int64_t, int64_t)>& body);

} // namespace fixsearch
