// Minimal fork-join helper. Work is split into fixed chunks and partial
// results are merged in chunk order, so reductions are deterministic
// regardless of the number of worker threads.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace apqr::par {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Number of chunks [0, total) is split into. Deliberately independent of
// the worker count so that chunked reductions are reproducible.
inline size_t chunk_count(uint64_t total) {
    return static_cast<size_t>(std::min<uint64_t>(total, 256));
}

// Runs body(chunk_index, begin, end) over [0, total) split into chunk_count
// contiguous ranges. Bodies must only touch their own chunk's state.
inline void for_chunks(uint64_t total, int threads,
                       const std::function<void(size_t, uint64_t, uint64_t)>& body) {
    const int n_workers = resolve_threads(threads);
    if (total == 0) return;
    const size_t n_chunks = chunk_count(total);
    std::vector<std::pair<uint64_t, uint64_t>> ranges(n_chunks);
    for (size_t i = 0; i < n_chunks; ++i) {
        ranges[i] = {total * i / n_chunks, total * (i + 1) / n_chunks};
    }
    if (n_workers == 1) {
        for (size_t i = 0; i < n_chunks; ++i) body(i, ranges[i].first, ranges[i].second);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    std::atomic<size_t> cursor{0};
    for (int w = 0; w < n_workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const size_t i = cursor.fetch_add(1);
                if (i >= n_chunks) return;
                body(i, ranges[i].first, ranges[i].second);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace apqr::par
