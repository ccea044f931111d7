#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace gridlock {

/// Worker cap for the process; subcommands set this from --threads.
inline std::atomic<int>& thread_limit() {
    static std::atomic<int> limit{1};
    return limit;
}

/// Runs fn(i) for i in [0, n) across up to thread_limit() workers and
/// collects results by task index, so the reduction order is deterministic
/// regardless of scheduling.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<Result> results(n);
    const int workers = std::min<int>(thread_limit().load(), static_cast<int>(n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                results[i] = fn(i);
        });
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace gridlock
