#include "pcd/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace pcd {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_chunks(std::size_t begin, std::size_t end, int threads,
                     const std::function<void(std::size_t, std::size_t, int)>& fn) {
    if (begin >= end) return;
    const std::size_t total = end - begin;
    const int t = std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), total);
    if (t <= 1) {
        fn(begin, end, 0);
        return;
    }
    const std::size_t chunk = (total + t - 1) / t;
    std::vector<std::thread> workers;
    workers.reserve(t - 1);
    for (int w = 1; w < t; ++w) {
        const std::size_t a = begin + chunk * static_cast<std::size_t>(w);
        if (a >= end) break;
        const std::size_t b = std::min(end, a + chunk);
        workers.emplace_back([&fn, a, b, w] { fn(a, b, w); });
    }
    fn(begin, std::min(end, begin + chunk), 0);
    for (auto& w : workers) w.join();
}

void parallel_for(std::size_t begin, std::size_t end, int threads,
                  const std::function<void(std::size_t, int)>& fn) {
    if (begin >= end) return;
    const std::size_t total = end - begin;
    const int t = std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), total);
    if (t <= 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i, 0);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(t - 1);
    for (int w = 1; w < t; ++w) {
        workers.emplace_back([&fn, begin, end, w, t] {
            for (std::size_t i = begin + static_cast<std::size_t>(w); i < end; i += t) fn(i, w);
        });
    }
    for (std::size_t i = begin; i < end; i += t) fn(i, 0);
    for (auto& w : workers) w.join();
}

}  // namespace pcd
