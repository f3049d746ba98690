#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace helimin::detail {

/// Runs fn(begin, end, worker) over contiguous chunks of [0, n). Chunk
/// boundaries depend only on n and the worker count, so reductions that
/// combine per-worker results in worker order are deterministic.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn)
{
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        fn(std::size_t{0}, n, 0u);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = n * w / workers, e = n * (w + 1) / workers;
        pool.emplace_back([&fn, &errors, b, e, w] {
            try {
                fn(b, e, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

} // namespace helimin::detail
