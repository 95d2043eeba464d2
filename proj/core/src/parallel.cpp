#include "cuspflow/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace cuspflow::parallel {

int resolve_workers(int requested) {
    if (const char* env = std::getenv("CUSPFLOW_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void for_each_index(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    int w = workers < 1 ? 1 : workers;
    if (w == 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int spawn = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(w), count));
    pool.reserve(static_cast<size_t>(spawn));
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace cuspflow::parallel
