#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace jamnet {

// Seeding and stream splitting.
//
// All randomness in the library flows through mt19937_64, whose output
// sequence is fixed by the C++ standard, plus the uniform / exponential
// draws below (implemented directly so no implementation-defined
// distribution code is involved). Identical seeds therefore reproduce
// identical results on any conforming platform.
//
// Stream splitting: sub-stream i of base seed s is seeded with
// split_seed(s, i) = mix(s + (i+1) * 0x9E3779B97F4A7C15), where mix is the
// splitmix64 finalizer. Experiments use realization index i; nested draws
// (per-trial, per-algorithm) split again from the derived seed.

constexpr std::uint64_t kSeedGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64_mix(base + (stream + 1) * kSeedGolden);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform on [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform on [0, hi)
    double uniform(double hi) { return uniform() * hi; }

    // exactly uniform on {0, ..., n-1}; rejection keeps it unbiased
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t rem = (max % n + 1) % n; // 2^64 mod n
        const std::uint64_t last_accepted = max - rem;
        std::uint64_t x;
        do { x = gen_(); } while (x > last_accepted);
        return x % n;
    }

    // Exp(1) via inversion; u in [0,1) keeps the draw finite and >= 0
    double exponential() { return -std::log1p(-uniform()); }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 gen_;
};

} // namespace jamnet
