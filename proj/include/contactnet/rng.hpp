#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace contactnet {

// splitmix64; used to derive independent stream seeds from one user seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One-shot seed derivation: mixes a base seed with a salt.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
    return splitmix64(state);
}

// Deterministic RNG wrapper. Draws do not depend on the standard library's
// distribution implementations, so streams are stable across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent stream derived from (seed, stream_id).
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (stream_id + 1));
        return Rng(splitmix64(s));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [lo, hi], inclusive; unbiased via rejection.
    long long uniform_int(long long lo, long long hi) {
        const std::uint64_t bound = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = gen_();
            if (x >= threshold) return lo + static_cast<long long>(x % bound);
        }
    }

    // Standard normal via Box-Muller; consumes exactly two uniforms per draw.
    double normal() {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace contactnet
