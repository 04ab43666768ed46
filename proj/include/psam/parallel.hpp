#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace psam {

// Evaluates f(0..n-1) on a small worker pool and returns the results in input
// order. f must be safe to call concurrently; the first exception thrown by
// any worker is rethrown on the caller after the pool drains.
template <typename F>
auto parallel_map(std::size_t n, F&& f) {
    using R = decltype(f(std::size_t{0}));
    std::vector<std::optional<R>> slots(n);
    if (n == 0) return std::vector<R>{};

    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency())));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto run = [&] {
        while (!abort.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                abort.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace psam
