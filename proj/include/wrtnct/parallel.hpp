#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace wrtnct {

namespace detail {
inline std::atomic<int> &thread_override() {
    static std::atomic<int> value{0};
    return value;
}
}  // namespace detail

/// Overrides the worker count; 0 restores the default.
inline void set_thread_count(int n) { detail::thread_override() = std::max(0, n); }

/// Worker count: explicit override, else WRTNCT_THREADS, else hardware concurrency.
inline int thread_count() {
    if (const int o = detail::thread_override(); o > 0) return o;
    if (const char *env = std::getenv("WRTNCT_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception &) {
        }
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Calls fn(i) for i in [0, count). Work is split statically; results must not depend on the split.
template <typename Fn>
void parallel_for(std::size_t count, Fn &&fn) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto &t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

/// SplitMix64 finalizer, used to derive independent per-chunk seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
    return splitmix64(splitmix64(seed ^ splitmix64(stream)) + chunk);
}

}  // namespace wrtnct
