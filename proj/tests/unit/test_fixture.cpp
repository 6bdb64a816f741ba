#include <gtest/gtest.h>

#include <fstream>

#include "json.hpp"
#include "snowforge/checksum.hpp"
#include "snowforge/features.hpp"
#include "snowforge/fixture.hpp"
#include "snowforge/median.hpp"
#include "test_util.hpp"

using namespace snowforge;
using sftest::TempDir;

// Seed-0 checksums, computed once and pinned. A change here means the
// fixture generator (or PNG encoding) changed.
TEST(Fixture, PinnedChecksumsSeedZero) {
    TempDir tmp;
    const auto fx = make_fixture(tmp / "fx", 0);
    EXPECT_EQ(to_hex(tree_checksum(tmp / "fx" / "gt")), "489d2a8e883baa47");
    EXPECT_EQ(to_hex(tree_checksum(tmp / "fx" / "masks")), "8aa05de86b355466");
    EXPECT_EQ(to_hex(tree_checksum(tmp / "fx" / "snowy")), "57501bcb9f5a85ef");
    EXPECT_EQ(to_hex(tree_checksum(tmp / "fx" / "clean")), "aa36303849f840b2");
    EXPECT_EQ(fx.spec, (OverlaySpec{25, 11, 0, 31, 64, 0}));

    std::ifstream in(tmp / "fx" / "fixture.json");
    const auto meta = nlohmann::json::parse(in);
    EXPECT_EQ(meta["checksums"]["snowy"], "57501bcb9f5a85ef");
}

TEST(Fixture, ShapesAndDeterminism) {
    const auto a = generate_fixture(3);
    EXPECT_EQ(a.gt.size(), 64u);
    EXPECT_EQ(a.gt.geometry(), (Geometry{256, 256, 3}));
    EXPECT_EQ(a.masks.size(), 48u);
    EXPECT_EQ(a.snowy.size(), 64u);
    EXPECT_EQ(a.snowy.geometry(), (Geometry{224, 224, 3}));
    EXPECT_EQ(a.spec.seed, 3u);
    const auto b = generate_fixture(3);
    EXPECT_EQ(a.snowy.frames(), b.snowy.frames());
    EXPECT_NE(a.snowy.frames(), generate_fixture(4).snowy.frames());
    for (const auto& m : a.masks.masks)
        for (auto v : m.samples()) ASSERT_GE(v, 0);
}

TEST(Fixture, SnowAddsKeypointsAndMedianRecoversBackground) {
    const auto fx = generate_fixture(0);
    EXPECT_GT(detect_keypoints(fx.snowy[0]).size(), detect_keypoints(fx.clean[0]).size());
    const Frame ms = temporal_median(fx.snowy);
    const Frame mc = temporal_median(fx.clean);
    std::size_t close = 0;
    for (std::size_t i = 0; i < ms.samples().size(); ++i) close += std::abs(ms.samples()[i] - mc.samples()[i]) <= 1;
    EXPECT_GE(static_cast<double>(close) / static_cast<double>(ms.samples().size()), 0.99);
}
