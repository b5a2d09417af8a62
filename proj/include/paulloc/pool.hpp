#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace paulloc {

// Runs fn(i) for i in [0, n_items) on `workers` threads.  Items are claimed
// through an atomic counter; every item writes only to its own output slot,
// so the schedule cannot influence results.  The first exception thrown by
// any item is rethrown after all threads joined.
inline void parallel_items(int n_items, int workers, const std::function<void(int)>& fn) {
    if (workers < 1) workers = 1;
    if (workers == 1 || n_items <= 1) {
        for (int i = 0; i < n_items; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_items) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const int n_threads = std::min(workers, n_items);
    threads.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace paulloc
