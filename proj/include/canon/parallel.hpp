// parallel.hpp — deterministic index-parallel map. Each index writes only its
// own slot, so results are bitwise independent of the thread count.
#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace canon {

// Thread cap from CANON_SZEGO_THREADS (>= 1); hardware concurrency otherwise.
inline unsigned thread_cap() {
    if (const char* env = std::getenv("CANON_SZEGO_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (...) {
        }
        return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

template <class Fn>
void parallel_map(std::size_t n, Fn&& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(thread_cap(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace canon
