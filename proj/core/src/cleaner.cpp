#include "snowforge/cleaner.hpp"

#include <algorithm>

#include "snowforge/median.hpp"
#include "snowforge/parallel.hpp"

namespace snowforge {

void CleanerParams::validate() const {
    if (window < 3 || window % 2 == 0) {
        throw Error(Errc::InvalidArgument, "window must be odd and >= 3, got " + std::to_string(window));
    }
    if (tau < 0 || tau > 255) throw Error(Errc::InvalidArgument, "tau must lie in [0, 255]");
}

bool parse_replace_mode(std::string_view text, ReplaceMode& out) noexcept {
    if (text == "replace-rgb" || text == "rgb") out = ReplaceMode::Rgb;
    else if (text == "replace-luma" || text == "luma") out = ReplaceMode::Luma;
    else return false;
    return true;
}

namespace {

struct Cleaned {
    Frame frame;
    std::vector<std::uint8_t> snow;
};

// Cleans frame t of `frames` (all the same geometry).
Cleaned clean_one(std::span<const Frame> frames, std::size_t t, const CleanerParams& p) {
    const auto n = static_cast<long long>(frames.size());
    const int half = p.window / 2;
    std::vector<const Frame*> window;
    window.reserve(static_cast<std::size_t>(p.window));
    for (int k = -half; k <= half; ++k) {
        const long long idx = std::clamp(static_cast<long long>(t) + k, 0LL, n - 1);
        window.push_back(&frames[static_cast<std::size_t>(idx)]);
    }

    const Frame& cur = frames[t];
    const Geometry g = cur.geometry();
    const auto ch = static_cast<std::size_t>(g.channels);
    Cleaned out{cur, std::vector<std::uint8_t>(g.pixel_count(), 0)};
    auto src = cur.samples();
    auto dst = out.frame.samples();

    std::vector<std::uint8_t> scratch(window.size());
    std::uint8_t med[3] = {0, 0, 0};
    for (std::size_t px = 0; px < g.pixel_count(); ++px) {
        for (std::size_t c = 0; c < ch; ++c) {
            for (std::size_t k = 0; k < window.size(); ++k) scratch[k] = window[k]->samples()[px * ch + c];
            med[c] = lower_median(scratch);
        }
        const std::size_t o = px * ch;
        const int cur_luma = ch == 3 ? luma_of(src[o], src[o + 1], src[o + 2]) : src[o];
        const int med_luma = ch == 3 ? luma_of(med[0], med[1], med[2]) : med[0];
        if (cur_luma - med_luma > p.tau) {
            out.snow[px] = 1;
            for (std::size_t c = 0; c < ch; ++c) dst[o + c] = med[c];
        }
    }
    return out;
}

std::vector<Cleaned> run(const FrameSequence& seq, const CleanerParams& p) {
    p.validate();
    if (seq.size() < static_cast<std::size_t>(p.window)) {
        throw Error(Errc::SequenceTooShort, "cleaning window " + std::to_string(p.window) + " exceeds " +
                                                std::to_string(seq.size()) + " frames");
    }
    std::vector<Frame> luma;
    std::span<const Frame> frames(seq.frames());
    if (p.mode == ReplaceMode::Luma && seq.geometry().channels == 3) {
        luma.resize(seq.size());
        parallel_for(0, seq.size(), [&](std::size_t i) { luma[i] = to_luma(seq[i]); });
        frames = luma;
    }
    std::vector<Cleaned> out(seq.size());
    parallel_for(0, seq.size(), [&](std::size_t t) { out[t] = clean_one(frames, t, p); });
    return out;
}

}  // namespace

FrameSequence temporal_median_clean(const FrameSequence& seq, const CleanerParams& params) {
    auto cleaned = run(seq, params);
    std::vector<Frame> frames;
    frames.reserve(cleaned.size());
    for (auto& c : cleaned) frames.push_back(std::move(c.frame));
    return FrameSequence(std::move(frames), seq.source_id());
}

std::vector<std::vector<std::uint8_t>> detect_snow(const FrameSequence& seq, const CleanerParams& params) {
    auto cleaned = run(seq, params);
    std::vector<std::vector<std::uint8_t>> flags;
    flags.reserve(cleaned.size());
    for (auto& c : cleaned) flags.push_back(std::move(c.snow));
    return flags;
}

EnhancedSequence load_external_enhanced(const fs::path& dir, const FrameSequence& reference, std::string method) {
    FrameSequence frames = load_sequence(dir);
    if (frames.size() != reference.size()) {
        throw Error(Errc::PairingMismatch, dir.string() + " holds " + std::to_string(frames.size()) +
                                               " frames, reference has " + std::to_string(reference.size()));
    }
    if (frames.geometry() != reference.geometry()) {
        throw Error(Errc::PairingMismatch, dir.string() + " frames are " + describe(frames.geometry()) +
                                               ", reference is " + describe(reference.geometry()));
    }
    return {std::move(frames), std::move(method)};
}

}  // namespace snowforge
