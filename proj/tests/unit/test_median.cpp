#include <gtest/gtest.h>

#include <algorithm>

#include "snowforge/frame_io.hpp"
#include "snowforge/median.hpp"
#include "test_util.hpp"

using namespace snowforge;
using sftest::TempDir;

namespace {

Frame sort_select(const std::vector<Frame>& frames) {
    Frame out(frames.front().geometry());
    std::vector<int> v;
    for (std::size_t i = 0; i < out.samples().size(); ++i) {
        v.clear();
        for (const auto& f : frames) v.push_back(f.samples()[i]);
        std::sort(v.begin(), v.end());
        out.samples()[i] = static_cast<std::uint8_t>(v[(v.size() - 1) / 2]);
    }
    return out;
}

Frame one_pixel_sequence_median(std::vector<std::uint8_t> values) {
    std::vector<Frame> frames;
    for (auto v : values) frames.push_back(Frame({1, 1, 1}, {v}));
    return temporal_median(frames);
}

}  // namespace

TEST(TemporalMedian, Examples) {
    EXPECT_EQ(one_pixel_sequence_median({10, 200, 12}).at(0, 0), 12);
    EXPECT_EQ(one_pixel_sequence_median({10, 20, 30, 40}).at(0, 0), 20);
    EXPECT_EQ(one_pixel_sequence_median({77}).at(0, 0), 77);

    SplitMix64 rng(1);
    const Frame f = sftest::random_frame(rng, {5, 4, 3});
    EXPECT_EQ(temporal_median(std::vector<Frame>(6, f)), f);
}

TEST(TemporalMedian, MatchesSortSelectOracle) {
    SplitMix64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const Geometry g{static_cast<int>(rng.uniform_int(1, 8)), static_cast<int>(rng.uniform_int(1, 8)),
                         rng.bounded(2) ? 3 : 1};
        const int n = static_cast<int>(rng.uniform_int(1, 9));
        std::vector<Frame> frames;
        for (int i = 0; i < n; ++i) frames.push_back(sftest::random_frame(rng, g));
        ASSERT_EQ(temporal_median(frames), sort_select(frames)) << "trial " << trial;
    }
}

TEST(TemporalMedian, HistogramPathForLongSequences) {
    SplitMix64 rng(3);
    std::vector<Frame> frames;
    for (int i = 0; i < 101; ++i) frames.push_back(sftest::random_frame(rng, {6, 5, 3}));
    EXPECT_EQ(temporal_median(frames), sort_select(frames));
    frames.pop_back();
    EXPECT_EQ(temporal_median(frames), sort_select(frames));
}

TEST(TemporalMedian, BothStrategiesAcrossLengths) {
    SplitMix64 rng(6);
    for (int n = 1; n <= 40; ++n) {
        std::vector<Frame> frames;
        for (int i = 0; i < n; ++i) frames.push_back(sftest::random_frame(rng, {7, 3, 3}));
        ASSERT_EQ(temporal_median(frames), sort_select(frames)) << "N = " << n;
    }
}

TEST(TemporalMedian, Errors) {
    EXPECT_THROW(temporal_median(std::vector<Frame>{}), Error);
    try {
        temporal_median(std::vector<Frame>{Frame({2, 2, 1}), Frame({2, 3, 1})});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::GeometryMismatch);
    }
}

TEST(LowerMedian, Basic) {
    std::vector<std::uint8_t> v{9, 1, 5, 3};
    EXPECT_EQ(lower_median(v), 3);
}

TEST(BandedMedian, EqualsInMemoryForEveryBandHeight) {
    TempDir tmp;
    SplitMix64 rng(4);
    const auto seq = sftest::random_sequence(rng, {64, 64, 3}, 7);
    save_sequence(tmp.path(), seq);
    const Frame expected = temporal_median(seq);
    for (int h : {1, 5, 13, 64, 100}) {
        EXPECT_EQ(temporal_median_banded(tmp.path(), BandPlan::with_height(h, 64)), expected) << "band " << h;
    }
}

TEST(BandPlan, BudgetArithmetic) {
    const Geometry g{100, 50, 3};
    const auto plan = BandPlan::for_budget(g, 10, 300 * 10 * 7);
    EXPECT_EQ(plan.band_height, 7);
    EXPECT_EQ(plan.band_count, 8);
    EXPECT_LE(plan.buffer_bytes(g, 10), std::size_t{300 * 10 * 7});
    EXPECT_EQ(BandPlan::for_budget(g, 10, std::size_t{1} << 30).band_height, 50);
    EXPECT_THROW(BandPlan::for_budget(g, 10, 100), Error);
    const auto one = BandPlan::with_height(64, 64);
    EXPECT_EQ(one.band_count, 1);
}
