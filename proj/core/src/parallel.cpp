#include "fixsearch/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fixsearch {

namespace {
std::atomic<int> g_max_threads{1};
}

void set_max_threads(int n) {
    g_max_threads.store(std::max(1, n));
}

int max_threads() {
    return g_max_threads.load();
}

void parallel_chunks(int64_t n, const std::function<void(int64_t, int64_t)>& body) {
    if (n <= 0) return;
    const int threads = std::min<int64_t>(g_max_threads.load(), n);
    if (threads <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(threads);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const int64_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int64_t lo = t * chunk;
        const int64_t hi = std::min<int64_t>(lo + chunk, n);
        if (lo >= hi) break;
        workers.emplace_back([&, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace fixsearch
