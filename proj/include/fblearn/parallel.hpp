#ifndef FBLEARN_PARALLEL_HPP
#define FBLEARN_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fblearn {

/// Worker count: min(FBLEARN_THREADS, hardware_concurrency), at least 1.
inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("FBLEARN_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return hw;
}

/// Runs fn(i) for i in [0, count) on up to worker_count() threads.
/// Each index owns its output slot, so results are identical for any
/// thread count; callers reduce sequentially afterwards.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (workers > count) workers = static_cast<unsigned>(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fblearn

#endif
