#pragma once

#include <cstdint>
#include <limits>

namespace ssrk {

/**
 * xoshiro256** seeded through SplitMix64.
 *
 * Streams: Rng(seed, stream) derives an independent state from the pair by
 * running SplitMix64 over seed ^ golden-ratio-mixed stream id, so trial t of
 * an experiment uses Rng(base_seed, t) and never shares state with another
 * trial. Satisfies UniformRandomBitGenerator, so it plugs into <random>
 * distributions.
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) {
        std::uint64_t sm = seed ^ mix(stream + 0x9e3779b97f4a7c15ULL);
        for (auto& word : state_) word = splitmix(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Child generator for sub-stream `stream`, derived from this generator's next output.
    Rng split(std::uint64_t stream) { return Rng((*this)(), stream); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix(std::uint64_t& s) {
        s += 0x9e3779b97f4a7c15ULL;
        return mix(s);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
};

}  // namespace ssrk
