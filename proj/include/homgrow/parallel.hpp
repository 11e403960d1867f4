// Deterministic fan-out over independent jobs. Results are stored by index,
// so output order never depends on scheduling.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace homgrow {

/// Worker count: HOMGROW_THREADS if set (minimum 1), else hardware threads.
inline std::size_t thread_budget()
{
    if (const char* env = std::getenv("HOMGROW_THREADS")) {
        try {
            const long v = std::stol(env);
            return v < 1 ? 1 : static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            return 1;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = fn(i) for i < n. The first exception by index is rethrown.
template <typename Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))>
{
    using R = decltype(fn(std::size_t{}));
    std::vector<R> out(n);
    const std::size_t workers = std::min(thread_budget(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(run);
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

} // namespace homgrow
