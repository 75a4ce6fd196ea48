#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace effsum {

// Hardware concurrency, capped by EFFSUM_THREADS when set.
inline unsigned worker_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EFFSUM_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) {
            n = std::min(n, static_cast<unsigned>(cap));
        }
    }
    return n;
}

// Runs fn(i) for i in [0, count). Callers write results by index, so the
// merged output does not depend on scheduling. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace effsum
