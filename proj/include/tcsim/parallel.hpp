#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace tcsim {

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs fn(i) for i in [0, count) on `workers` threads. Work is striped by
/// index, so results written to slot i are identical for any worker count.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    workers = resolve_workers(workers);
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([t, workers, count, &fn] {
            for (std::size_t i = t; i < count; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace tcsim
