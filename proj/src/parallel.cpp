#include "cherenkov/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace cherenkov {

namespace {
std::atomic<unsigned> g_max_workers{0};
}

void set_max_workers(unsigned workers) { g_max_workers = workers; }

unsigned max_workers()
{
    unsigned w = g_max_workers.load();
    if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
    return w;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_block)
{
    if (n == 0) return;
    std::size_t workers = std::min<std::size_t>(max_workers(), (n + min_block - 1) / std::max<std::size_t>(min_block, 1));
    if (workers <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

}  // namespace cherenkov
