#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace escf {

// Run fn(chunk_index) for chunk_index in [0, n_chunks) on up to `workers`
// threads. Results land in a vector indexed by chunk, so merging them in
// order is deterministic regardless of the worker count.
template <class R, class Fn>
std::vector<R> map_chunks(std::size_t n_chunks, unsigned workers, Fn fn) {
    std::vector<R> out(n_chunks);
    if (workers <= 1 || n_chunks <= 1) {
        for (std::size_t i = 0; i < n_chunks; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_chunks) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned n = workers < n_chunks ? workers : static_cast<unsigned>(n_chunks);
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace escf
