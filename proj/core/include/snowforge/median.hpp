#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "snowforge/frame.hpp"
#include "snowforge/frame_io.hpp"

namespace snowforge {

/// Default band buffer budget for streamed medians (512 MiB).
inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{512} << 20;

/// Horizontal band partition of a frame for streamed reductions.
struct BandPlan {
    int band_height{1};
    int band_count{1};

    /// Covers `frame_height` with bands of `band_height` rows (last band may be short).
    static BandPlan with_height(int band_height, int frame_height);

    /// Tallest band whose buffer (band_height x row_samples x n_frames bytes)
    /// fits `budget`. Throws InvalidArgument if not even one row fits.
    static BandPlan for_budget(const Geometry& g, std::size_t n_frames, std::size_t budget);

    std::size_t buffer_bytes(const Geometry& g, std::size_t n_frames) const noexcept {
        return static_cast<std::size_t>(band_height) * g.row_samples() * n_frames;
    }
};

/// Lower-middle order statistic of `values` (index (n-1)/2 after sorting).
/// Reorders the span. `values` must be non-empty.
std::uint8_t lower_median(std::span<std::uint8_t> values);

/// Per-pixel, per-channel temporal median. For even N the lower of the two
/// middle values is taken. Throws EmptySequence / GeometryMismatch.
Frame temporal_median(std::span<const Frame> frames);
Frame temporal_median(const FrameSequence& seq);
inline Frame temporal_median(const std::vector<Frame>& frames) { return temporal_median(std::span<const Frame>(frames)); }

/// Same result as temporal_median on the fully loaded directory, computed
/// band by band so only plan.band_height rows of every frame are resident.
Frame temporal_median_banded(const fs::path& dir, const BandPlan& plan,
                             const FramePattern& pattern = FramePattern{});

}  // namespace snowforge
