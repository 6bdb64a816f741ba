#include <gtest/gtest.h>

#include <fstream>

#include "snowforge/checksum.hpp"
#include "snowforge/dataset.hpp"
#include "snowforge/frame_io.hpp"
#include "snowforge/parallel.hpp"
#include "test_util.hpp"

using namespace snowforge;
using sftest::TempDir;

namespace {

// Two clean sources and two mask sources of small RGB frames.
struct Sources {
    std::vector<fs::path> clean;
    std::vector<fs::path> masks;
};

Sources make_sources(const fs::path& root, int clean_frames = 12) {
    SplitMix64 rng(99);
    Sources s;
    for (int i = 0; i < 2; ++i) {
        const auto dir = root / "clean" / ("c" + std::to_string(i));
        save_sequence(dir, sftest::random_sequence(rng, {32 + 4 * i, 24, 3}, clean_frames + i));
        s.clean.push_back(dir);
    }
    for (int i = 0; i < 2; ++i) {
        const auto dir = root / "masks" / ("m" + std::to_string(i));
        save_mask_sequence(dir, sftest::random_masks(rng, {16, 12 + 2 * i, 3}, 3 + i));
        s.masks.push_back(dir);
    }
    return s;
}

DatasetConfig small_config(const Sources& s, const fs::path& out) {
    DatasetConfig cfg;
    cfg.clean_sources = s.clean;
    cfg.mask_sources = s.masks;
    cfg.n_train = 4;
    cfg.n_test = 2;
    cfg.out_len = 8;
    cfg.master_seed = 7;
    cfg.out_dir = out;
    return cfg;
}

}  // namespace

TEST(Dataset, DefaultsGiveEightyThreeThousandPairs) {
    DatasetConfig cfg;
    EXPECT_EQ(cfg.n_train, 300);
    EXPECT_EQ(cfg.n_test, 10);
    EXPECT_EQ(cfg.out_len, 269);
    DatasetManifest m;
    m.sequences.resize(static_cast<std::size_t>(cfg.n_train + cfg.n_test));
    for (auto& r : m.sequences) r.frame_count = cfg.out_len;
    EXPECT_EQ(m.total_pairs(), 83390);
    EXPECT_GE(m.total_pairs(), 83000);
}

TEST(Dataset, BuildLayoutAndVerify) {
    TempDir tmp;
    const auto src = make_sources(tmp.path());
    const auto cfg = small_config(src, tmp / "out");
    const auto m = build_dataset(cfg);
    ASSERT_EQ(m.sequences.size(), 6u);
    EXPECT_EQ(m.total_pairs(), 48);
    EXPECT_EQ(m.sequences[0].sequence_id, "seq_00000");
    EXPECT_EQ(m.sequences[0].split, "train");
    EXPECT_EQ(m.sequences[5].split, "test");
    for (const auto& r : m.sequences) {
        EXPECT_EQ(r.overlay.seed, stream_seed(7, static_cast<std::uint64_t>(std::stoi(r.sequence_id.substr(4)))));
        const auto dir = cfg.out_dir / r.relative_dir();
        EXPECT_EQ(list_sequence(dir / "snowy").files.size(), 8u);
        EXPECT_EQ(list_sequence(dir / "clean").files.size(), 8u);
        EXPECT_EQ(probe_frame(dir / "snowy" / "frame_000000.png").width, r.mask_shape.width);
        EXPECT_EQ(r.checksums.snowy_first, file_checksum(dir / "snowy" / "frame_000000.png"));
    }
    EXPECT_FALSE(fs::exists(cfg.out_dir / kInvalidMarker));

    const auto rep = verify_dataset(cfg.out_dir / kManifestName, VerifyOptions{true});
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.frames_checked, 96);
}

TEST(Dataset, ManifestJsonRoundTrip) {
    TempDir tmp;
    const auto src = make_sources(tmp.path());
    const auto m = build_dataset(small_config(src, tmp / "out"));
    const std::string text = manifest_to_json(m);
    const auto back = manifest_from_json(text);
    EXPECT_EQ(manifest_to_json(back), text);
    EXPECT_EQ(read_manifest(tmp / "out" / kManifestName).sequences.size(), m.sequences.size());
    EXPECT_THROW(manifest_from_json("{\"schema_version\": 1}"), Error);
    EXPECT_THROW(manifest_from_json("not json"), Error);
}

TEST(Dataset, DeterministicAcrossRunsAndThreads) {
    TempDir tmp;
    const auto src = make_sources(tmp.path());
    set_thread_count(1);
    build_dataset(small_config(src, tmp / "a"));
    set_thread_count(8);
    build_dataset(small_config(src, tmp / "b"));
    set_thread_count(0);
    build_dataset(small_config(src, tmp / "c"));
    const auto a = tree_checksum(tmp / "a");
    EXPECT_EQ(a, tree_checksum(tmp / "b"));
    EXPECT_EQ(a, tree_checksum(tmp / "c"));
    auto other = small_config(src, tmp / "d");
    other.master_seed = 8;
    build_dataset(other);
    EXPECT_NE(a, tree_checksum(tmp / "d"));
}

TEST(Dataset, RefusesNonEmptyOutput) {
    TempDir tmp;
    const auto src = make_sources(tmp.path());
    fs::create_directories(tmp / "out");
    std::ofstream(tmp / "out" / "keep.txt") << "x";
    try {
        build_dataset(small_config(src, tmp / "out"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::IoError);
    }
}

TEST(Dataset, ShortSourcesFailWithSequenceTooShort) {
    TempDir tmp;
    SplitMix64 rng(5);
    Sources s;
    for (int i = 0; i < 2; ++i) {
        const auto dir = tmp / ("c" + std::to_string(i));
        save_sequence(dir, sftest::random_sequence(rng, {20, 20, 3}, 1));
        s.clean.push_back(dir);
    }
    const auto md = tmp / "m";
    save_mask_sequence(md, sftest::random_masks(rng, {10, 10, 3}, 2));
    s.masks.push_back(md);
    auto cfg = small_config(s, tmp / "out");
    cfg.out_len = 2;
    try {
        build_dataset(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SequenceTooShort);
    }
    EXPECT_FALSE(fs::exists(tmp / "out" / kManifestName));
}

TEST(Dataset, DiscoverSources) {
    TempDir tmp;
    const auto src = make_sources(tmp.path());
    const auto found = discover_sources(tmp / "clean");
    ASSERT_EQ(found.size(), 2u);
    EXPECT_EQ(found[0].filename(), "c0");
    EXPECT_EQ(discover_sources(src.clean[1]), std::vector<fs::path>{src.clean[1]});
}

TEST(Verify, DeletedFrameFailsThatSequence) {
    TempDir tmp;
    const auto src = make_sources(tmp.path());
    const auto cfg = small_config(src, tmp / "out");
    const auto m = build_dataset(cfg);
    fs::remove(cfg.out_dir / m.sequences[2].relative_dir() / "snowy" / "frame_000003.png");
    const auto rep = verify_dataset(cfg.out_dir / kManifestName);
    EXPECT_FALSE(rep.passed());
    for (std::size_t i = 0; i < rep.sequences.size(); ++i) {
        EXPECT_EQ(rep.sequences[i].ok, i != 2) << i;
    }
    ASSERT_FALSE(rep.sequences[2].problems.empty());
    EXPECT_NE(rep.sequences[2].problems.front().find("MissingFrame"), std::string::npos);
}

TEST(Verify, BitFlipReportsChecksumMismatch) {
    TempDir tmp;
    const auto src = make_sources(tmp.path());
    const auto cfg = small_config(src, tmp / "out");
    const auto m = build_dataset(cfg);
    const auto victim = cfg.out_dir / m.sequences[1].relative_dir() / "clean" / "frame_000007.png";
    std::fstream f(victim, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(-1, std::ios::end);  // last byte of the IEND CRC
    char c = 0;
    f.read(&c, 1);
    f.seekp(-1, std::ios::end);
    c = static_cast<char>(c ^ 0x01);
    f.write(&c, 1);
    f.close();
    const auto rep = verify_dataset(cfg.out_dir / kManifestName);
    EXPECT_FALSE(rep.passed());
    EXPECT_FALSE(rep.sequences[1].ok);
    bool saw = false;
    for (const auto& p : rep.sequences[1].problems) saw |= p.find("checksum mismatch") != std::string::npos;
    EXPECT_TRUE(saw);
}

TEST(Verify, InvalidMarkerFailsDataset) {
    TempDir tmp;
    const auto src = make_sources(tmp.path());
    const auto cfg = small_config(src, tmp / "out");
    build_dataset(cfg);
    std::ofstream(cfg.out_dir / kInvalidMarker) << "aborted\n";
    EXPECT_FALSE(verify_dataset(cfg.out_dir / kManifestName).passed());
}
