#pragma once

#include <cstdint>

namespace qss {

// Small counter-style generator (splitmix64). Every random draw in the project
// flows through this type so that transcripts are bit-identical across runs,
// platforms, and thread counts. Per-round streams are derived with mix_seed,
// which lets rounds execute in parallel without sharing generator state.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    std::uint32_t uniform_int(std::uint32_t bound) {
        return static_cast<std::uint32_t>(next_u64() % bound);
    }
};

// Derives an independent stream for (seed, a, b), e.g. (config seed, round id, purpose).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    Rng r(seed ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xd1b54a32d192ed03ull));
    return r.next_u64();
}

}  // namespace qss
