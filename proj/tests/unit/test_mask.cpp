#include <gtest/gtest.h>

#include "snowforge/frame_io.hpp"
#include "snowforge/mask.hpp"
#include "snowforge/median.hpp"
#include "test_util.hpp"

using namespace snowforge;
using sftest::TempDir;

TEST(ExtractMask, StaticSceneGivesZeroMasks) {
    SplitMix64 rng(1);
    const Frame f = sftest::random_frame(rng, {7, 5, 3});
    const FrameSequence seq(std::vector<Frame>(4, f));
    const auto masks = extract_mask_sequence(seq, f);
    ASSERT_EQ(masks.size(), 4u);
    for (const auto& m : masks.masks)
        for (auto v : m.samples()) ASSERT_EQ(v, 0);
}

TEST(ExtractMask, SignedDifference) {
    const FrameSequence seq(std::vector<Frame>{Frame({2, 1, 1}, {200, 3})});
    const Frame med({2, 1, 1}, {12, 250});
    const auto masks = extract_mask_sequence(seq, med);
    EXPECT_EQ(masks.masks[0].at(0, 0), 188);
    EXPECT_EQ(masks.masks[0].at(1, 0), -247);
}

TEST(ExtractMask, NoiseFloorZeroesSmallResiduals) {
    const FrameSequence seq(std::vector<Frame>{Frame({3, 1, 1}, {13, 20, 9})});
    const Frame med({3, 1, 1}, {10, 10, 10});
    const auto masks = extract_mask_sequence(seq, med, 3);
    EXPECT_EQ(masks.masks[0].at(0, 0), 0);
    EXPECT_EQ(masks.masks[0].at(1, 0), 10);
    EXPECT_EQ(masks.masks[0].at(2, 0), 0);
    EXPECT_THROW(extract_mask_sequence(seq, med, -1), Error);
}

TEST(ExtractMask, RoundTripReconstructsFrames) {
    SplitMix64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto seq = sftest::random_sequence(rng, {9, 6, 3}, static_cast<int>(rng.uniform_int(1, 9)));
        const Frame med = temporal_median(seq);
        const auto masks = extract_mask_sequence(seq, med);
        for (std::size_t t = 0; t < seq.size(); ++t) {
            const auto m = masks.masks[t].samples();
            for (std::size_t i = 0; i < m.size(); ++i) ASSERT_EQ(med.samples()[i] + m[i], seq[t].samples()[i]);
        }
    }
}

TEST(ExtractMask, MovingDotOnStaticTexture) {
    SplitMix64 rng(3);
    const Frame bg = sftest::random_frame(rng, {12, 4, 1});
    std::vector<Frame> frames;
    for (int t = 0; t < 9; ++t) {
        Frame f = bg;
        f.at(t, 1) = 255;
        frames.push_back(f);
    }
    const FrameSequence seq(frames);
    const Frame med = temporal_median(seq);
    EXPECT_EQ(med, bg);
    const auto masks = extract_mask_sequence(seq, med);
    for (int t = 0; t < 9; ++t) {
        for (int y = 0; y < 4; ++y) {
            for (int x = 0; x < 12; ++x) {
                const int expected = (x == t && y == 1) ? 255 - bg.at(x, y) : 0;
                ASSERT_EQ(masks.masks[static_cast<std::size_t>(t)].at(x, y), expected);
            }
        }
    }
}

TEST(ExtractPatchMasks, WholeFrameAndBounds) {
    SplitMix64 rng(4);
    const auto seq = sftest::random_sequence(rng, {10, 8, 3}, 5);
    const auto whole = extract_patch_masks(seq, Rect{0, 0, 10, 8});
    EXPECT_EQ(whole.masks, extract_mask_sequence(seq, temporal_median(seq)).masks);

    const auto patch = extract_patch_masks(seq, Rect{2, 1, 4, 3});
    EXPECT_EQ(patch.geometry(), (Geometry{4, 3, 3}));
    EXPECT_EQ(patch.patch_x0, 2);
    EXPECT_EQ(patch.patch_y0, 1);
    try {
        extract_patch_masks(seq, Rect{8, 0, 4, 3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::CropOutOfBounds);
    }
}

TEST(MaskStorage, SaveLoadProbe) {
    TempDir tmp;
    SplitMix64 rng(5);
    for (int ch : {1, 3}) {
        auto masks = sftest::random_masks(rng, {6, 5, ch}, 4);
        masks.patch_x0 = 3;
        masks.patch_y0 = 9;
        masks.noise_floor = 2;
        masks.median_ref = "median.png";
        const auto dir = tmp / ("m" + std::to_string(ch));
        save_mask_sequence(dir, masks);
        EXPECT_TRUE(fs::exists(dir / kMaskSidecar));
        const auto back = load_mask_sequence(dir);
        EXPECT_EQ(back.masks, masks.masks);
        EXPECT_EQ(back.patch_x0, 3);
        EXPECT_EQ(back.patch_y0, 9);
        EXPECT_EQ(back.noise_floor, 2);
        EXPECT_EQ(back.source_id, masks.source_id);
        const auto info = probe_mask_sequence(dir);
        EXPECT_EQ(info.geometry, (Geometry{6, 5, ch}));
        EXPECT_EQ(info.frame_count, 4u);
    }
}
