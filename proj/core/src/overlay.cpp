#include "snowforge/overlay.hpp"

#include <algorithm>

#include "snowforge/parallel.hpp"

namespace snowforge {

namespace {

std::string shape_text(const SequenceShape& s) {
    return std::to_string(s.width) + "x" + std::to_string(s.height) + "x" + std::to_string(s.frames);
}

[[noreturn]] void out_of_bounds(const std::string& what) { throw Error(Errc::OverlayOutOfBounds, what); }

}  // namespace

void validate_overlay(const OverlaySpec& s, const SequenceShape& gt, const SequenceShape& mask) {
    if (mask.width > gt.width || mask.height > gt.height) {
        out_of_bounds("mask " + shape_text(mask) + " does not fit clean " + shape_text(gt));
    }
    if (s.dx < 0 || s.dx > gt.width - mask.width) out_of_bounds("dx = " + std::to_string(s.dx));
    if (s.dy < 0 || s.dy > gt.height - mask.height) out_of_bounds("dy = " + std::to_string(s.dy));
    if (s.out_len < 1) out_of_bounds("out_len = " + std::to_string(s.out_len));
    if (s.t_start < 0 || s.t_start > gt.frames - s.out_len) {
        out_of_bounds("t_start = " + std::to_string(s.t_start) + " with out_len " + std::to_string(s.out_len) +
                      " over " + std::to_string(gt.frames) + " clean frames");
    }
    if (s.mask_phase < 0 || s.mask_phase >= mask.frames) {
        out_of_bounds("mask_phase = " + std::to_string(s.mask_phase));
    }
}

OverlaySpec draw_overlay_spec(SplitMix64& rng, const SequenceShape& gt, const SequenceShape& mask,
                              long long out_len) {
    if (out_len < 1 || out_len > gt.frames) {
        throw Error(Errc::SequenceTooShort, "out_len " + std::to_string(out_len) + " needs that many clean frames, source has " +
                                                std::to_string(gt.frames));
    }
    if (mask.frames < 1) throw Error(Errc::EmptySequence, "mask sequence has no frames");
    if (mask.width > gt.width || mask.height > gt.height) {
        out_of_bounds("mask " + shape_text(mask) + " does not fit clean " + shape_text(gt));
    }
    OverlaySpec s;
    s.out_len = out_len;
    s.dx = static_cast<int>(rng.uniform_int(0, gt.width - mask.width));
    s.dy = static_cast<int>(rng.uniform_int(0, gt.height - mask.height));
    s.t_start = rng.uniform_int(0, gt.frames - out_len);
    s.mask_phase = rng.uniform_int(0, mask.frames - 1);
    return s;
}

ComposedFrame compose_frame(const Frame& gt_frame, const ResidualFrame& mask, int dx, int dy) {
    if (gt_frame.channels() != mask.channels()) {
        throw Error(Errc::GeometryMismatch, "clean frame has " + std::to_string(gt_frame.channels()) +
                                                " channels, mask has " + std::to_string(mask.channels()));
    }
    if (dx < 0 || dy < 0 || dx > gt_frame.width() - mask.width() || dy > gt_frame.height() - mask.height()) {
        out_of_bounds("mask " + describe(mask.geometry()) + " at (" + std::to_string(dx) + ", " +
                      std::to_string(dy) + ") exceeds clean " + describe(gt_frame.geometry()));
    }
    ComposedFrame out{Frame(mask.geometry()), crop(gt_frame, Rect{dx, dy, mask.width(), mask.height()})};
    auto clean = out.clean.samples();
    auto res = mask.samples();
    auto snowy = out.snowy.samples();
    for (std::size_t i = 0; i < snowy.size(); ++i) {
        snowy[i] = static_cast<std::uint8_t>(std::clamp(static_cast<int>(clean[i]) + res[i], 0, 255));
    }
    return out;
}

ComposedPair compose_snowy(const FrameSequence& gt, const MaskSequence& masks, const OverlaySpec& spec) {
    const Geometry gg = gt.geometry();
    const Geometry mg = masks.geometry();
    validate_overlay(spec, {gg.width, gg.height, static_cast<long long>(gt.size())},
                     {mg.width, mg.height, static_cast<long long>(masks.size())});
    const auto n_mask = static_cast<long long>(masks.size());
    std::vector<Frame> snowy(static_cast<std::size_t>(spec.out_len));
    std::vector<Frame> clean(static_cast<std::size_t>(spec.out_len));
    parallel_for(0, snowy.size(), [&](std::size_t t) {
        const auto ti = static_cast<long long>(t);
        const auto& mask = masks.masks[static_cast<std::size_t>((spec.mask_phase + ti) % n_mask)];
        auto composed = compose_frame(gt[static_cast<std::size_t>(spec.t_start + ti)], mask, spec.dx, spec.dy);
        snowy[t] = std::move(composed.snowy);
        clean[t] = std::move(composed.clean);
    });
    return {FrameSequence(std::move(snowy), gt.source_id() + "+snow"), FrameSequence(std::move(clean), gt.source_id())};
}

}  // namespace snowforge
