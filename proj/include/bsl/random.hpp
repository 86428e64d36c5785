#pragma once

#include <cstdint>

namespace bsl {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based random stream. Draw i is mix64(key + (i + 1) * 0x9E3779B97F4A7C15),
/// i.e. the SplitMix64 sequence for `key`, addressed by an explicit counter so a
/// stream can be reproduced or skipped ahead without replaying it.
///
/// Uniforms take the top 53 bits of one draw. Normals use the Box-Muller cosine
/// branch on two consecutive draws: sqrt(-2 ln(1 - u1)) * cos(2 pi u2).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t key, std::uint64_t counter = 0)
        : key_(key), counter_(counter) {}

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64() {
        ++counter_;
        return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal.
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace bsl
