#pragma once

#include <cstdint>
#include <utility>

#include "snowforge/frame.hpp"
#include "snowforge/mask.hpp"
#include "snowforge/rng.hpp"

namespace snowforge {

/// Placement of a mask sequence on a clean clip. One spec covers a whole
/// generated sequence, so offsets are constant over time.
struct OverlaySpec {
    int dx{0};              ///< horizontal crop offset into the clean frames
    int dy{0};              ///< vertical crop offset
    long long t_start{0};   ///< first clean frame used
    long long mask_phase{0};///< mask index paired with output frame 0
    long long out_len{1};   ///< frames generated
    std::uint64_t seed{0};  ///< stream the placement was drawn from (provenance only)

    bool operator==(const OverlaySpec&) const = default;
};

/// Spatial size plus frame count of a sequence.
struct SequenceShape {
    int width{0};
    int height{0};
    long long frames{0};
};

/// Throws OverlayOutOfBounds naming the violated bound.
void validate_overlay(const OverlaySpec& spec, const SequenceShape& gt, const SequenceShape& mask);

/// Draws dx, dy, t_start and mask_phase, in that order, uniformly from `rng`.
/// The returned seed field is left 0 for the caller to fill in.
/// Throws SequenceTooShort when out_len > gt.frames or out_len < 1, and
/// OverlayOutOfBounds when the mask does not fit inside the clean frame.
OverlaySpec draw_overlay_spec(SplitMix64& rng, const SequenceShape& gt, const SequenceShape& mask,
                              long long out_len);

/// One output pair: clean = crop(gt_frame, dx, dy, mask size), snowy =
/// clamp(clean + mask, 0, 255).
struct ComposedFrame {
    Frame snowy;
    Frame clean;
};
ComposedFrame compose_frame(const Frame& gt_frame, const ResidualFrame& mask, int dx, int dy);

struct ComposedPair {
    FrameSequence snowy;
    FrameSequence clean;
};

/// Frame t pairs gt[t_start + t] with masks[(mask_phase + t) mod N_mask].
ComposedPair compose_snowy(const FrameSequence& gt, const MaskSequence& masks, const OverlaySpec& spec);

}  // namespace snowforge
