#pragma once

#include <cstdint>

#include "snowforge/mask.hpp"
#include "snowforge/overlay.hpp"

namespace snowforge {

/// Shape of the standard synthetic fixture.
struct FixtureParams {
    int width{256};
    int height{256};
    int frames{64};
    int mask_width{224};
    int mask_height{224};
    int mask_frames{48};
    int particles{40};
};

/// Deterministic (clean, mask, snowy) triplet used by tests and the
/// acceptance suite.
///
/// Clean source: RGB value noise (four octaves on lattices of 32, 16, 8 and
/// 4 px) with a dark 60x40 rectangle moving one pixel right per frame.
/// Masks: `particles` Gaussian blobs with sigma in [1, 3] px, peak residual
/// in [80, 200] and integer drift of 8..14 px per frame on the dominant axis,
/// wrapping at the mask borders. The pair is compose_snowy(gt, masks, spec)
/// with spec drawn for out_len = frames.
///
/// Draw order from SplitMix64(seed): lattice values (coarse to fine, row
/// major), particles (x, y, speed, sign, minor speed, axis, sigma, peak),
/// then the overlay spec.
struct Fixture {
    FrameSequence gt;
    MaskSequence masks;
    OverlaySpec spec;
    FrameSequence snowy;
    FrameSequence clean;
};

Fixture generate_fixture(std::uint64_t seed, const FixtureParams& params = {});

/// Writes <out>/gt, <out>/masks, <out>/snowy, <out>/clean and
/// <out>/fixture.json.
Fixture make_fixture(const fs::path& out_dir, std::uint64_t seed, const FixtureParams& params = {});

}  // namespace snowforge
