#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace debtrun::detail {

inline constexpr std::size_t kChunk = 2048;

/// Evaluates `work(begin, end)` on fixed chunks of [0, n) and returns the
/// per-chunk results in chunk order, so reductions do not depend on how
/// many threads ran.
template <class Acc, class Work>
std::vector<Acc> run_chunks(std::size_t n, Work&& work) {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<Acc> out(chunks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                out[c] = work(c * kChunk, std::min(n, (c + 1) * kChunk));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(chunks);
                return;
            }
        }
    };
    const std::size_t threads =
        std::min<std::size_t>(chunks, std::max(1u, std::thread::hardware_concurrency()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    return out;
}

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    void merge(const Moments& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        n += o.n;
    }
};

}  // namespace debtrun::detail
