#pragma once

#include <cstdint>

namespace snowforge {

/// SplitMix64 (Steele, Lea, Flood). Every random decision in the toolkit is
/// drawn from one of these so outputs are fixed by the seed alone.
class SplitMix64 {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += kGamma;
        return mix(state_);
    }

    /// Uniform draw in [0, n) by modulo reduction; n must be > 0.
    constexpr std::uint64_t bounded(std::uint64_t n) noexcept { return next() % n; }

    /// Uniform draw in [lo, hi] (inclusive).
    constexpr long long uniform_int(long long lo, long long hi) noexcept {
        return lo + static_cast<long long>(bounded(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    constexpr double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t state() const noexcept { return state_; }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Seed of the independent stream owned by item `index` under `master`:
/// the first SplitMix64 output for state master ^ index.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return SplitMix64(master ^ index).next();
}

}  // namespace snowforge
