#include "common/threading.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace resonet {

namespace {
std::atomic<int> g_threads{0};
// Nested parallel_for calls run serially instead of oversubscribing.
thread_local bool t_inside_worker = false;
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count_setting() { return g_threads.load(); }

int effective_thread_count() {
    int n = g_threads.load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t k = static_cast<std::size_t>(effective_thread_count());
    if (k > n) k = n;
    if (k <= 1 || t_inside_worker) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::size_t first_error_index = n;

    auto run_block = [&](std::size_t t) {
        bool was_inside = t_inside_worker;
        t_inside_worker = true;
        std::size_t lo = t * n / k;
        std::size_t hi = (t + 1) * n / k;
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (i < first_error_index) {
                    first_error_index = i;
                    first_error = std::current_exception();
                }
                break;
            }
        }
        t_inside_worker = was_inside;
    };

    std::vector<std::thread> pool;
    pool.reserve(k - 1);
    for (std::size_t t = 1; t < k; ++t) pool.emplace_back(run_block, t);
    run_block(0);
    for (auto& th : pool) th.join();

    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace resonet
