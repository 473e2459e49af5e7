#pragma once

#include <cstdint>

namespace resonet {

// Small deterministic RNG used for optimizer restarts. splitmix64 gives
// bit-identical streams on every platform, unlike the standard library
// distributions whose output is implementation-defined. Each restart derives
// its own stream from (seed, restart index), so runs are reproducible and
// restarts can be evaluated in any order, including in parallel.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }
};

inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    SplitMix64 s(seed ^ (0xA3EC647659359ACDull * (stream + 1)));
    return s.next_u64();
}

}  // namespace resonet
