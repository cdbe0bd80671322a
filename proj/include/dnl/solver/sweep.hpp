#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace dnl {

/// Worker count: DNL_LAB_THREADS if set to a positive integer, else the hardware concurrency.
inline unsigned sweep_threads() {
    if (const char* env = std::getenv("DNL_LAB_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(0..count-1) on up to `threads` workers; results are returned in index order.
/// The first exception thrown by any task is rethrown after all workers finish.
template <class Fn>
auto parallel_map(std::size_t count, Fn&& fn, unsigned threads = sweep_threads()) {
    using Result = decltype(fn(std::size_t{0}));
    std::vector<Result> out(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace dnl
