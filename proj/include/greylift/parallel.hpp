#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace greylift {

// Worker count for replica-parallel generators. 0 means hardware parallelism.
struct Execution {
    unsigned threads = 0;

    unsigned resolved() const {
        if (threads > 0) return threads;
        if (const char* env = std::getenv("GREYLIFT_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0) return static_cast<unsigned>(v);
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }
};

// Calls body(begin, end) over disjoint chunks of [0, n). Results must not
// depend on the chunking; generators guarantee that by drawing every replica
// from its own stream.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t chunk, const Execution& exec, Body&& body) {
    if (n == 0) return;
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(exec.resolved(), n_chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) body(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < n_chunks; c += workers) {
                try {
                    body(c * chunk, std::min(n, (c + 1) * chunk));
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace greylift
