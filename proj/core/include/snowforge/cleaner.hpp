#pragma once

#include <string>

#include "snowforge/frame.hpp"
#include "snowforge/frame_io.hpp"

namespace snowforge {

enum class ReplaceMode {
    Rgb,   ///< detected pixels take the per-channel window median
    Luma,  ///< output is luma only; detected pixels take the median luma
};

struct CleanerParams {
    int window{5};  ///< odd, >= 3
    int tau{25};    ///< luma excess over the window median that marks snow
    ReplaceMode mode{ReplaceMode::Rgb};

    /// Throws InvalidArgument.
    void validate() const;
};

/// Detect-then-replace temporal median filter. For frame t the window is
/// t - W/2 .. t + W/2 with indices clamped to the sequence (edge frames
/// repeat). A pixel is snow iff luma(frame) - luma(window median) > tau;
/// only those pixels are replaced. Throws SequenceTooShort when N < W.
FrameSequence temporal_median_clean(const FrameSequence& seq, const CleanerParams& params = {});

/// Per-frame snow flags (1 = replaced) that temporal_median_clean would use.
std::vector<std::vector<std::uint8_t>> detect_snow(const FrameSequence& seq, const CleanerParams& params = {});

/// Output of an external enhancer, tagged for reports.
struct EnhancedSequence {
    FrameSequence frames;
    std::string method;
};

/// Loads <dir>/frame_%06d.png and checks it pairs with `reference`
/// (same count and geometry); throws PairingMismatch otherwise.
EnhancedSequence load_external_enhanced(const fs::path& dir, const FrameSequence& reference,
                                        std::string method);

bool parse_replace_mode(std::string_view text, ReplaceMode& out) noexcept;

}  // namespace snowforge
