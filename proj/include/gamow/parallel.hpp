#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace gamow {

inline std::atomic<int>& thread_count_ref() {
    static std::atomic<int> n{0};
    return n;
}

inline void set_thread_count(int n) { thread_count_ref().store(n < 1 ? 1 : n); }

inline int thread_count() {
    int n = thread_count_ref().load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

// Run fn(i) for i in [0,n); worker assignment is irrelevant to the result
// because every write lands at a caller-owned index.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    int T = thread_count();
    if (T <= 1 || n < 2 * static_cast<std::size_t>(T)) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(T);
    for (int t = 0; t < T; ++t)
        workers.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& w : workers) w.join();
}

// Deterministic parallel reduction: per-row partial sums are computed in
// parallel, then combined sequentially in row order so the result is
// bit-identical for any thread count.
template <class RowFn>
double parallel_row_sum(std::size_t rows, RowFn&& row_fn) {
    std::vector<double> partial(rows, 0.0);
    parallel_for(rows, [&](std::size_t r) { partial[r] = row_fn(r); });
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += partial[r];
    return s;
}

} // namespace gamow
