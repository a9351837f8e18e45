#ifndef PWLAB_RANDOM_HPP
#define PWLAB_RANDOM_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "core.hpp"

namespace pwlab {

inline std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: the i-th draw of sample k depends only on (seed, k, i),
/// so results never depend on how samples are spread across threads.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t sample) noexcept
        : key_(mix64(mix64(seed) ^ (sample * 0xd1b54a32d192ed03ULL)))
    {
    }

    std::uint64_t next_u64() noexcept { return mix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

    /// Uniform in the open interval (0, 1).
    double uniform() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    double normal() noexcept
    {
        const double u = uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * pi * v);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Worker count from PWLAB_THREADS; never affects results.
inline unsigned thread_count()
{
    if (const char* env = std::getenv("PWLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(begin, end) over fixed chunks of [0, n) and returns the per-chunk results
/// in chunk order. The partition depends only on n and chunk, never on threads.
template <class T, class F>
std::vector<T> map_chunks(std::size_t n, std::size_t chunk, F&& fn)
{
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t chunks = (n + chunk - 1) / chunk;
    std::vector<T> out(chunks);
    const unsigned workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(chunks, 1));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c)
            out[c] = fn(c * chunk, std::min(n, (c + 1) * chunk));
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks)
                return;
            try {
                out[c] = fn(c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(work);
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

} // namespace pwlab

#endif // PWLAB_RANDOM_HPP
