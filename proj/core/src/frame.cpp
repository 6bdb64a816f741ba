#include "snowforge/frame.hpp"

namespace snowforge {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::MissingFrame: return "MissingFrame";
        case Errc::GeometryMismatch: return "GeometryMismatch";
        case Errc::DecodeError: return "DecodeError";
        case Errc::CropOutOfBounds: return "CropOutOfBounds";
        case Errc::MaskRangeError: return "MaskRangeError";
        case Errc::EmptySequence: return "EmptySequence";
        case Errc::OverlayOutOfBounds: return "OverlayOutOfBounds";
        case Errc::SequenceTooShort: return "SequenceTooShort";
        case Errc::PairingMismatch: return "PairingMismatch";
        case Errc::FrameTooSmall: return "FrameTooSmall";
        case Errc::SchemaError: return "SchemaError";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

std::string describe(const Geometry& g) {
    return std::to_string(g.width) + "x" + std::to_string(g.height) + "x" + std::to_string(g.channels);
}

void validate_geometry(const Geometry& g) {
    if (g.width < 1 || g.height < 1 || (g.channels != 1 && g.channels != 3)) {
        throw Error(Errc::GeometryMismatch, "invalid geometry " + describe(g));
    }
}

FrameSequence::FrameSequence(std::vector<Frame> frames, std::string source_id)
    : frames_(std::move(frames)), source_id_(std::move(source_id)) {
    if (frames_.empty()) {
        throw Error(Errc::EmptySequence, "sequence '" + source_id_ + "' has no frames");
    }
    require_uniform<std::uint8_t>(frames_, frames_.front().geometry());
}

const Geometry& FrameSequence::geometry() const {
    if (frames_.empty()) {
        throw Error(Errc::EmptySequence, "sequence '" + source_id_ + "' has no frames");
    }
    return frames_.front().geometry();
}

Frame to_luma(const Frame& f) {
    if (f.channels() == 1) return f;
    Frame out(Geometry{f.width(), f.height(), 1});
    auto src = f.samples();
    auto dst = out.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = luma_of(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
    }
    return out;
}

}  // namespace snowforge
