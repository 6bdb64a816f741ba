#pragma once

#include <string>
#include <vector>

#include "snowforge/frame.hpp"
#include "snowforge/frame_io.hpp"

namespace snowforge {

/// Patch size used for snow extraction unless overridden (width x height).
inline constexpr int kDefaultPatchWidth = 550;
inline constexpr int kDefaultPatchHeight = 600;

/// Dynamic snow residuals of one clip: masks[t] = frame[t] - median.
struct MaskSequence {
    std::vector<ResidualFrame> masks;
    std::string source_id;
    int patch_x0{0};
    int patch_y0{0};
    std::string median_ref;
    int noise_floor{0};

    std::size_t size() const noexcept { return masks.size(); }
    const Geometry& geometry() const;
};

/// Signed per-sample difference frame - median, no clamping. Residuals with
/// |r| <= noise_floor are then zeroed (noise_floor = 0 keeps the plain
/// difference). Throws GeometryMismatch / InvalidArgument.
MaskSequence extract_mask_sequence(const FrameSequence& seq, const Frame& median, int noise_floor = 0);

/// Crops every frame to `rect`, takes the patch median and extracts masks.
/// patch_x0/patch_y0 record the rectangle origin. Throws CropOutOfBounds.
MaskSequence extract_patch_masks(const FrameSequence& seq, const Rect& rect, int noise_floor = 0);

/// Layout: <dir>/frame_%06d.png (16-bit, bias-encoded) plus <dir>/mask.json.
void save_mask_sequence(const fs::path& dir, const MaskSequence& masks);
MaskSequence load_mask_sequence(const fs::path& dir);

/// Sidecar fields without decoding any frame.
struct MaskInfo {
    Geometry geometry;
    std::size_t frame_count{0};
};
MaskInfo probe_mask_sequence(const fs::path& dir);

inline constexpr const char* kMaskSidecar = "mask.json";

}  // namespace snowforge
