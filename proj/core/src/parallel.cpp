#include "solsurf/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace solsurf {

namespace {

std::atomic<int> g_override{0};

int env_threads()
{
    const char* s = std::getenv("SOLSURF_THREADS");
    if (!s) return 0;
    int v = std::atoi(s);
    return v > 0 ? v : 0;
}

} // namespace

int thread_count()
{
    if (int o = g_override.load(); o > 0) return o;
    if (int e = env_threads(); e > 0) return e;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_thread_count(int n) { g_override.store(n > 0 ? n : 0); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn)
{
    if (n == 0) return;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), (n + 1023) / 1024);
    if (workers <= 1) {
        fn(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex m;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t b = w * chunk;
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e] {
            try {
                fn(b, e);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace solsurf
