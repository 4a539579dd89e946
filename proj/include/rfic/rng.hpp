#pragma once

#include <cstdint>

namespace rfic {

// Counter-based 64-bit generator (SplitMix64, Steele-Lea-Flood constants).
// The state advances by a fixed odd increment, so the n-th output is a pure
// function of (seed, n): skip-ahead is an addition and parallel replicas can
// derive independent substreams from (master_seed, index) without coordination.
class SplitMix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit SplitMix64(std::uint64_t seed) : state_(seed), seed_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        state_ += kGamma;
        return mix(state_);
    }

    // Advance as if next() had been called n times.
    void skip(std::uint64_t n) { state_ += n * kGamma; }

    // Uniform on the open interval (0, 1); 53 significant bits.
    double next_double() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Child stream for substream `index`, independent of this stream's
    // position (derived from the original seed, not the current state).
    SplitMix64 split(std::uint64_t index) const {
        return SplitMix64(mix(seed_ ^ mix((index + 1) * kGamma)));
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t state_;
    std::uint64_t seed_;
};

} // namespace rfic
