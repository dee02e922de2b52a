#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace sb {

inline unsigned default_worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Static block partition over [0,n).  Each index writes only its own output
// slot, so results do not depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = lo + chunk < n ? lo + chunk : n;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace sb
