#pragma once

#include <cstdint>
#include <random>

namespace routelab {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a tag.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return mix64(mix64(seed) ^ mix64(tag + 0x632be59bd9b4e019ULL));
}

/// Seeded generator whose outputs are identical on every platform.
///
/// The standard distributions are implementation-defined, so index and real
/// sampling are done here directly on top of the mt19937_64 bit stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). `bound` must be positive.
    std::uint64_t index(std::uint64_t bound) {
        // Lemire-style rejection keeps the result unbiased.
        const std::uint64_t limit = -bound % bound;
        for (;;) {
            const std::uint64_t x = engine_();
            const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
            if (static_cast<std::uint64_t>(m) >= limit)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::mt19937_64 engine_;
};

} // namespace routelab
