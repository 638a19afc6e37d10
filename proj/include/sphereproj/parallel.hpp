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

namespace sphereproj {

/// Number of worker threads. Honours SPHEREPROJ_THREADS as an upper cap.
inline unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPHEREPROJ_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return hw;
}

/// Runs fn(begin, end) over [0, count) in fixed blocks of `block` items.
/// Block boundaries do not depend on the thread count, so any per-item
/// result computed inside a block is bit-identical across runs.
template <class Fn>
void parallel_for_blocks(std::size_t count, std::size_t block, Fn&& fn) {
    if (count == 0) return;
    block = std::max<std::size_t>(block, 1);
    const std::size_t nblocks = (count + block - 1) / block;
    const unsigned nthreads =
        static_cast<unsigned>(std::min<std::size_t>(worker_count(), nblocks));

    auto run_block = [&](std::size_t b) {
        const std::size_t lo = b * block;
        fn(lo, std::min(count, lo + block));
    };

    if (nthreads <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t b = next++; b < nblocks; b = next++) {
                    try {
                        run_block(b);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = nblocks;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace sphereproj
