#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace lambda_memory {

/// Worker count from the LAMBDA_MEM_WORKERS environment variable, else hardware concurrency.
int default_workers();

/// Runs body(i) for i in [0, n) on up to `workers` threads. `body` must not throw.
template <class Body>
void parallel_for(std::size_t n, int workers, Body&& body)
{
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                body(i);
            }
        });
    }
}

} // namespace lambda_memory
