#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "snowforge/frame.hpp"

namespace snowforge {

struct KeyPoint {
    int x{0};
    int y{0};
    int score{0};  ///< sum of |circle - centre| - threshold over the winning arc

    bool operator==(const KeyPoint&) const = default;
};

/// 256-bit binary descriptor; bit i lives in words[i / 64], position i % 64.
struct Descriptor {
    std::array<std::uint64_t, 4> words{};

    bool bit(int i) const noexcept { return (words[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u; }
    void set(int i) noexcept { words[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }

    bool operator==(const Descriptor&) const = default;
};

inline int hamming(const Descriptor& a, const Descriptor& b) noexcept {
    int d = 0;
    for (std::size_t k = 0; k < a.words.size(); ++k) d += std::popcount(a.words[k] ^ b.words[k]);
    return d;
}

/// One intensity test: bit set iff smoothed(a) < smoothed(b). Offsets are
/// relative to the keypoint.
struct BriefPair {
    int ax, ay, bx, by;
};

inline constexpr int kFastThreshold = 20;
inline constexpr int kFastArc = 9;
inline constexpr int kPatchRadius = 15;
inline constexpr int kBlurRadius = 2;
/// Keypoints closer than this to any border get no descriptor.
inline constexpr int kDescriptorMargin = kPatchRadius + kBlurRadius;

/// The fixed 256-pair test pattern (generated from SplitMix64 seed 42).
std::span<const BriefPair, 256> brief_pattern() noexcept;

/// FAST-9 segment test on the luma of `f` with 3x3 non-maximum suppression.
/// Output is in raster order. Throws FrameTooSmall below 7x7.
std::vector<KeyPoint> detect_keypoints(const Frame& f, int threshold = kFastThreshold);

/// Raw segment-test corners before suppression (score per pixel, 0 = none).
std::vector<int> fast_score_map(const Frame& luma, int threshold = kFastThreshold);

struct Features {
    std::vector<KeyPoint> keypoints;  ///< those that received a descriptor
    std::vector<Descriptor> descriptors;
};

/// BRIEF descriptors on 5x5 box-smoothed luma. Keypoints inside the
/// descriptor margin are dropped.
Features compute_descriptors(const Frame& f, std::span<const KeyPoint> keypoints);
/// Same with a caller-supplied pattern (at most 256 pairs, offsets within
/// kPatchRadius).
Features compute_descriptors(const Frame& f, std::span<const KeyPoint> keypoints,
                             std::span<const BriefPair> pattern);

struct Match {
    int query{0};  ///< index into the first set
    int train{0};  ///< index into the second set
    int distance{0};

    bool operator==(const Match&) const = default;
};

inline constexpr double kRatio = 0.8;

/// Mutual nearest neighbours under Hamming distance that also pass the
/// ratio test best < 0.8 * second-best in both directions (a side with a
/// single candidate skips its ratio test). Ties go to the lowest index.
/// Sorted by query index.
std::vector<Match> match_features(std::span<const Descriptor> a, std::span<const Descriptor> b);

}  // namespace snowforge
