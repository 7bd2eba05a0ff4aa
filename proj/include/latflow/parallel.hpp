#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace latflow {

// Runs fn(i) for i in [0, total).  Work is handed out by an atomic counter,
// so scheduling is nondeterministic but results are not: callers key all
// randomness and output slots on the index i.  threads <= 1 runs inline.
template <typename F>
inline void parallel_for(long long total, int threads, F&& fn) {
    if (threads <= 1 || total <= 1) {
        for (long long i = 0; i < total; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const long long i = next.fetch_add(1);
            if (i >= total || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int nw = std::min<long long>(threads, total);
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace latflow
