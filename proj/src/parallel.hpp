#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace hema::detail {

// Runs body(i) for i in [0, n) over contiguous blocks on worker threads.
// Each index is written by exactly one worker, so results do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_block = 256) {
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, std::max<std::size_t>(1, n / min_block));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t block = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * block, end = std::min(n, begin + block);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &body] {
            for (std::size_t i = begin; i < end; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace hema::detail
