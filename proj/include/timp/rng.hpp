#pragma once

#include <cstdint>

namespace timp {

// Fixed 64-bit mixing finalizer. Together with the golden-ratio increment
// below this pins the whole random stream, so sampled graphs reproduce
// bit-for-bit across platforms.
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in {0, ..., bound-1} by modulo; bias is < 2^-53 of a draw for
    // the bounds used here (pair-array indices), which is acceptable and
    // keeps the stream consumption rate fixed at one draw per request.
    std::uint64_t next_below(std::uint64_t bound) {
        return next_u64() % bound;
    }

private:
    std::uint64_t state_;
};

// Per-trial seeds: the index-th raw output of the master stream, available
// in O(1) so parallel trials never contend for a shared generator.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master + kGolden * (index + 1));
}

} // namespace timp
