#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace nonfrac {

/// Worker count: `requested` if nonzero, else hardware concurrency, capped by
/// the NONFRAC_WORKERS environment variable when it is set.
inline std::size_t resolve_workers(std::size_t requested = 0) {
    std::size_t n = requested != 0 ? requested
                                   : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("NONFRAC_WORKERS")) {
        try {
            const auto limit = static_cast<std::size_t>(std::stoul(cap));
            if (limit >= 1) n = std::min(n, limit);
        } catch (const std::exception&) {
            // unparsable cap: ignored
        }
    }
    return n;
}

/// Calls fn(i) for i in [0, count) on up to `workers` threads.  The first
/// exception thrown by any task is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Maps indices [0, count) in parallel, in blocks, and feeds the results to
/// `reduce` strictly in index order, so the reduction is independent of the
/// worker count.
template <class Map, class Reduce>
void map_reduce_ordered(std::size_t count, std::size_t workers, std::size_t block, Map&& map,
                        Reduce&& reduce) {
    using Value = decltype(map(std::size_t{0}));
    block = std::max<std::size_t>(1, block);
    for (std::size_t start = 0; start < count; start += block) {
        const std::size_t n = std::min(block, count - start);
        std::vector<Value> values(n);
        parallel_for(n, workers, [&](std::size_t i) { values[i] = map(start + i); });
        for (std::size_t i = 0; i < n; ++i) reduce(start + i, values[i]);
    }
}

}  // namespace nonfrac
