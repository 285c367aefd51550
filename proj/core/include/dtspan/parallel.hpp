#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace dtspan {

// Runs fn(chunk_index, begin, end) over [0, total) split into contiguous
// chunks, one per worker. Callers merge per-chunk results in chunk order, so
// parallel runs reduce deterministically.
inline void parallel_chunks(long long total, int jobs,
                            const std::function<void(int, long long, long long)>& fn) {
    if (total <= 0) return;
    jobs = static_cast<int>(std::max<long long>(1, std::min<long long>(jobs, total)));
    if (jobs == 1) {
        fn(0, 0, total);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    const long long step = (total + jobs - 1) / jobs;
    for (int c = 0; c < jobs; ++c) {
        const long long lo = c * step;
        const long long hi = std::min(total, lo + step);
        if (lo >= hi) break;
        workers.emplace_back([&fn, c, lo, hi] { fn(c, lo, hi); });
    }
    for (auto& w : workers) w.join();
}

}  // namespace dtspan
