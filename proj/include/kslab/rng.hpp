#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace kslab {

/// Counter-based generator: the k-th output is a keyed hash of k, so a
/// (seed, stream) pair names a fixed, independent sequence.
class StreamRng {
  public:
    using result_type = std::uint64_t;

    StreamRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ mix(stream + kGolden))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(key_ + (++counter_) * kGolden); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint64_t counter() const { return counter_; }

  private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Samples per Monte Carlo chunk. Chunk c always draws from stream c, so
/// results do not depend on the thread count.
inline constexpr std::uint64_t kChunkSize = 1 << 15;

/// Runs `body(rng, count) -> Acc` over ceil(total / kChunkSize) chunks and
/// folds the partial results in chunk order with `Acc::operator+=`.
template <typename Acc, typename Body>
Acc run_chunked(std::uint64_t total, std::uint64_t seed, Body body) {
    const std::uint64_t chunks = (total + kChunkSize - 1) / kChunkSize;
    std::vector<Acc> partial(chunks);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(hw, chunks));

    std::vector<std::exception_ptr> failures(workers == 0 ? 1 : workers);

    auto work = [&](unsigned w) {
        try {
            for (std::uint64_t c = w; c < chunks; c += workers) {
                StreamRng rng(seed, c);
                const std::uint64_t count = std::min(kChunkSize, total - c * kChunkSize);
                partial[c] = body(rng, count);
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
        for (auto &t : pool)
            t.join();
    }
    for (const auto &f : failures)
        if (f)
            std::rethrow_exception(f);
    Acc acc{};
    for (const auto &p : partial)
        acc += p;
    return acc;
}

} // namespace kslab
