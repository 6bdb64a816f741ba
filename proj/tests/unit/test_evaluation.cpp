#include <gtest/gtest.h>

#include <sstream>

#include "snowforge/evaluation.hpp"
#include "snowforge/features.hpp"
#include "snowforge/quality.hpp"
#include "test_util.hpp"

using namespace snowforge;

namespace {

FrameSequence textured(SplitMix64& rng, int n) {
    // Blocky texture so FAST finds corners.
    std::vector<Frame> frames;
    Frame base({64, 64, 3});
    for (int by = 0; by < 8; ++by)
        for (int bx = 0; bx < 8; ++bx) {
            const auto v = static_cast<std::uint8_t>(rng.bounded(256));
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    for (int c = 0; c < 3; ++c) base.at(bx * 8 + x, by * 8 + y, c) = v;
        }
    for (int t = 0; t < n; ++t) frames.push_back(base);
    return FrameSequence(frames, "tex");
}

}  // namespace

TEST(Evaluation, MethodEqualsClean) {
    SplitMix64 rng(1);
    const auto clean = textured(rng, 4);
    const auto snowy = sftest::random_sequence(rng, {64, 64, 3}, 4);
    const auto ev = evaluate_sequence(clean, clean, snowy, "s", "clean");
    ASSERT_EQ(ev.rows.size(), 4u);
    const auto stats = feature_stats(clean, "s", "clean");
    EXPECT_EQ(ev.stats.keypoints, stats.keypoints);
    EXPECT_EQ(ev.stats.matches.size(), 3u);
    for (const auto& r : ev.rows) {
        EXPECT_EQ(r.psnr_db, kPsnrIdentical);
        EXPECT_DOUBLE_EQ(r.ssim, 1.0);
        EXPECT_EQ(r.keypoints, static_cast<int>(detect_keypoints(clean[0]).size()));
    }
    EXPECT_FALSE(ev.rows[0].matches_prev.has_value());
    EXPECT_EQ(ev.rows[1].matches_prev, ev.stats.matches[0]);
    EXPECT_LT(ev.input_quality.mean_psnr, ev.quality.mean_psnr);
}

TEST(Evaluation, PairingMismatch) {
    SplitMix64 rng(2);
    const auto a = sftest::random_sequence(rng, {32, 32, 3}, 3);
    const auto b = sftest::random_sequence(rng, {32, 32, 3}, 2);
    try {
        evaluate_sequence(a, a, b, "s", "m");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::PairingMismatch);
    }
}

TEST(Evaluation, CsvFormat) {
    std::vector<MetricsRow> rows{{"seq_1", "snowy", 0, 12, std::nullopt, 23.5, 0.9},
                                 {"seq_1", "snowy", 1, 10, 7, kPsnrIdentical, 1.0}};
    std::ostringstream out;
    write_metrics_csv(out, rows);
    EXPECT_EQ(out.str(),
              "sequence_id,method,t,keypoints,matches_prev,psnr_db,ssim\n"
              "seq_1,snowy,0,12,,23.500000,0.90000000\n"
              "seq_1,snowy,1,10,7,99.000000,1.00000000\n");
}

TEST(Evaluation, MeanAndMedian) {
    EXPECT_DOUBLE_EQ(mean_of({1, 2, 3, 10}), 4.0);
    EXPECT_DOUBLE_EQ(median_of({10, 1, 3, 2}), 2.5);
    EXPECT_DOUBLE_EQ(median_of({5, 1, 3}), 3.0);
}
