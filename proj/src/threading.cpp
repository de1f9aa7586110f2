#include "tdcis/threading.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tdcis {

namespace {
std::atomic<int> g_budget{0};

int detect_budget() {
    if (const char* env = std::getenv("TDCIS_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}
} // namespace

int thread_budget() {
    int b = g_budget.load();
    if (b <= 0) {
        b = detect_budget();
        g_budget.store(b);
    }
    return b;
}

void set_thread_budget(int n) {
    // TDCIS_THREADS wins over programmatic settings so that deployments can
    // cap a misbehaving job without touching its config.
    if (const char* env = std::getenv("TDCIS_THREADS")) {
        int e = std::atoi(env);
        if (e > 0) {
            g_budget.store(e);
            return;
        }
    }
    g_budget.store(n > 0 ? n : 1);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    int workers = std::min(thread_budget(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace tdcis
