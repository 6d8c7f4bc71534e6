#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace treemeasure {

/// Splits [0, n) into contiguous ranges and sums `count(begin, end)` over them.
template <class RangeCount>
std::uint64_t parallel_sum(std::uint64_t n, RangeCount count, unsigned threads = 0) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    if (threads == 1 || n < 4096) return count(std::uint64_t{0}, n);
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n));
    std::vector<std::uint64_t> partial(threads, 0);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n + threads - 1) / threads;
    for (unsigned i = 0; i < threads; ++i) {
        pool.emplace_back([&, i] {
            const std::uint64_t begin = std::min<std::uint64_t>(n, i * chunk);
            const std::uint64_t end = std::min<std::uint64_t>(n, begin + chunk);
            try {
                partial[i] = count(begin, end);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::uint64_t total = 0;
    for (auto p : partial) total += p;
    return total;
}

}  // namespace treemeasure
