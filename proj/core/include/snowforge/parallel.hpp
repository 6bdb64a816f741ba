#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace snowforge {

/// Process-wide worker bound. 0 selects std::thread::hardware_concurrency().
void set_thread_count(unsigned n) noexcept;
unsigned thread_count() noexcept;

/// Runs body(i) for every i in [begin, end) on up to thread_count() workers.
/// Work is handed out by an atomic counter; callers must only write
/// per-index state so results never depend on the schedule. The first
/// exception (lowest index) is rethrown after all workers join.
template <typename Body>
void parallel_for(std::size_t begin, std::size_t end, Body&& body) {
    if (end <= begin) return;
    const std::size_t n = end - begin;
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{begin};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::size_t first_error_index = end;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= end) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (i < first_error_index) {
                    first_error_index = i;
                    first_error = std::current_exception();
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace snowforge
