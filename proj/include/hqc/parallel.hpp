#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hqc {

/// Workers for `work` items, at least `grain` items each.
inline std::size_t worker_count(std::size_t work, std::size_t grain = 64) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(hw, work / std::max<std::size_t>(grain, 1)));
}

/// Runs body(i) for i in [0, count) over contiguous blocks. If any calls
/// throw, the exception of the lowest failing index is rethrown, so error
/// reports do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t grain = 64) {
    const std::size_t workers = worker_count(count, grain);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            const std::size_t lo = w * block, hi = std::min(count, lo + block);
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    for (std::size_t w = 0; w < workers; ++w)
        if (errors[w]) std::rethrow_exception(errors[w]);
}

}  // namespace hqc
