#include <gtest/gtest.h>

#include "snowforge/cleaner.hpp"
#include "snowforge/frame_io.hpp"
#include "test_util.hpp"

using namespace snowforge;
using sftest::TempDir;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no snowforge::Error thrown";
    return Errc::IoError;
}

FrameSequence gray_with_dot(int n, int dot_frame) {
    std::vector<Frame> frames(static_cast<std::size_t>(n), sftest::filled({9, 7, 3}, 128));
    auto& f = frames[static_cast<std::size_t>(dot_frame)];
    for (int c = 0; c < 3; ++c) f.at(4, 3, c) = 255;
    return FrameSequence(frames);
}

}  // namespace

TEST(Cleaner, StaticSequenceUnchanged) {
    SplitMix64 rng(1);
    const Frame f = sftest::random_frame(rng, {12, 10, 3});
    const FrameSequence seq(std::vector<Frame>(7, f));
    EXPECT_EQ(temporal_median_clean(seq).frames(), seq.frames());
}

TEST(Cleaner, DotReplacedByBackground) {
    const auto seq = gray_with_dot(8, 3);
    const auto out = temporal_median_clean(seq, {5, 25, ReplaceMode::Rgb});
    ASSERT_EQ(out.size(), 8u);
    for (std::size_t t = 0; t < 8; ++t) EXPECT_EQ(out[t], sftest::filled({9, 7, 3}, 128)) << t;
}

TEST(Cleaner, SaturatedThresholdIsIdentity) {
    SplitMix64 rng(2);
    const auto seq = sftest::random_sequence(rng, {10, 10, 3}, 6);
    EXPECT_EQ(temporal_median_clean(seq, {5, 255, ReplaceMode::Rgb}).frames(), seq.frames());
}

TEST(Cleaner, OnlyDetectedPixelsChange) {
    SplitMix64 rng(3);
    const auto seq = sftest::random_sequence(rng, {14, 11, 3}, 9);
    const CleanerParams p{3, 20, ReplaceMode::Rgb};
    const auto out = temporal_median_clean(seq, p);
    const auto flags = detect_snow(seq, p);
    std::size_t detected = 0;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        for (int y = 0; y < 11; ++y)
            for (int x = 0; x < 14; ++x) {
                const bool flag = flags[t][static_cast<std::size_t>(y) * 14 + x] != 0;
                detected += flag;
                bool differs = false;
                for (int c = 0; c < 3; ++c) differs |= out[t].at(x, y, c) != seq[t].at(x, y, c);
                if (!flag) ASSERT_FALSE(differs);
            }
    }
    EXPECT_GT(detected, 0u);
}

TEST(Cleaner, DetectionRuleByHand) {
    // One pixel over time: 10, 10, 50, 10, 10 with W = 3 at t = 2 -> window
    // {10, 50, 10}, median 10, excess 40.
    std::vector<Frame> frames;
    for (std::uint8_t v : {10, 10, 50, 10, 36}) frames.push_back(Frame({1, 1, 1}, {v}));
    const FrameSequence seq(frames);
    const auto flags = detect_snow(seq, {3, 25, ReplaceMode::Rgb});
    EXPECT_EQ(flags[2][0], 1);
    // t = 4: window {10, 36, 36} clamped -> median 36, nothing flagged.
    EXPECT_EQ(flags[4][0], 0);
    const auto out = temporal_median_clean(seq, {3, 25, ReplaceMode::Rgb});
    EXPECT_EQ(out[2].at(0, 0), 10);
    EXPECT_EQ(out[4].at(0, 0), 36);
}

TEST(Cleaner, DarkeningNeverFlagged) {
    std::vector<Frame> frames(7, sftest::filled({6, 6, 3}, 200));
    frames[3] = sftest::filled({6, 6, 3}, 0);
    const FrameSequence seq(frames);
    const auto out = temporal_median_clean(seq, {5, 0, ReplaceMode::Rgb});
    EXPECT_EQ(out.frames(), seq.frames());
}

TEST(Cleaner, LumaModeOutputsLuma) {
    const auto seq = gray_with_dot(6, 2);
    const auto out = temporal_median_clean(seq, {5, 25, ReplaceMode::Luma});
    EXPECT_EQ(out.geometry(), (Geometry{9, 7, 1}));
    for (const auto& f : out) EXPECT_EQ(f, sftest::filled({9, 7, 1}, 128));
}

TEST(Cleaner, Errors) {
    const auto seq = gray_with_dot(4, 1);
    EXPECT_EQ(code_of([&] { temporal_median_clean(seq, {5, 25, ReplaceMode::Rgb}); }), Errc::SequenceTooShort);
    EXPECT_EQ(code_of([&] { temporal_median_clean(seq, {2, 25, ReplaceMode::Rgb}); }), Errc::InvalidArgument);
    EXPECT_EQ(code_of([&] { temporal_median_clean(seq, {3, 256, ReplaceMode::Rgb}); }), Errc::InvalidArgument);
    ReplaceMode m{};
    EXPECT_TRUE(parse_replace_mode("replace-luma", m));
    EXPECT_EQ(m, ReplaceMode::Luma);
    EXPECT_FALSE(parse_replace_mode("blur", m));
}

TEST(ExternalEnhanced, LoadsAndChecksPairing) {
    TempDir tmp;
    SplitMix64 rng(4);
    const auto ref = sftest::random_sequence(rng, {550, 600, 1}, 2);
    save_sequence(tmp / "ok", ref);
    const auto e = load_external_enhanced(tmp / "ok", ref, "model");
    EXPECT_EQ(e.method, "model");
    EXPECT_EQ(e.frames.frames(), ref.frames());

    save_sequence(tmp / "wide", sftest::random_sequence(rng, {551, 600, 1}, 2));
    EXPECT_EQ(code_of([&] { load_external_enhanced(tmp / "wide", ref, "m"); }), Errc::PairingMismatch);
    save_sequence(tmp / "short", sftest::random_sequence(rng, {550, 600, 1}, 1));
    EXPECT_EQ(code_of([&] { load_external_enhanced(tmp / "short", ref, "m"); }), Errc::PairingMismatch);

    fs::remove(tmp / "ok" / "frame_000001.png");
    save_frame(tmp / "ok" / "frame_000002.png", ref[0]);
    EXPECT_EQ(code_of([&] { load_external_enhanced(tmp / "ok", ref, "m"); }), Errc::MissingFrame);
}
