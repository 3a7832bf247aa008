#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace quadprime::detail {

// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks are
// claimed dynamically, so callers must make each task write only its own
// output slice. The first exception thrown by any task is rethrown.
template <class Task>
void parallel_for(std::size_t count, unsigned workers, Task&& task) {
    const std::size_t threads = std::min<std::size_t>(std::max(1u, workers), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t)
        pool.emplace_back(body);
    body();
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace quadprime::detail
