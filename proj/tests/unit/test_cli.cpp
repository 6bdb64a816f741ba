#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "snowforge/checksum.hpp"
#include "snowforge/dataset.hpp"
#include "snowforge/fixture.hpp"
#include "snowforge/frame_io.hpp"
#include "snowforge/median.hpp"
#include "test_util.hpp"

using namespace snowforge;
using sftest::TempDir;

namespace {

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "snowforge");
    return cli::run(args);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FixtureParams tiny() {
    FixtureParams p;
    p.width = 48;
    p.height = 48;
    p.frames = 12;
    p.mask_width = 40;
    p.mask_height = 40;
    p.mask_frames = 6;
    p.particles = 4;
    return p;
}

}  // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}), cli::kUsageError);
    EXPECT_EQ(run({"frobnicate"}), cli::kUsageError);
    EXPECT_EQ(run({"median", "--in", "x"}), cli::kUsageError);
    EXPECT_EQ(run({"--help"}), cli::kOk);
    EXPECT_EQ(run({"denoise", "--in", "a", "--out", "b", "--mode", "sharpen"}), cli::kUsageError);
}

TEST(Cli, DataErrors) {
    TempDir tmp;
    EXPECT_EQ(run({"median", "--in", (tmp / "absent").string(), "--out", (tmp / "m.png").string()}), cli::kDataError);
}

TEST(Cli, MedianMatchesLibrary) {
    TempDir tmp;
    SplitMix64 rng(1);
    const auto seq = sftest::random_sequence(rng, {20, 10, 3}, 5);
    save_sequence(tmp / "seq", seq);
    ASSERT_EQ(run({"median", "--in", (tmp / "seq").string(), "--out", (tmp / "m.png").string(), "--band-height", "3"}),
              cli::kOk);
    EXPECT_EQ(load_frame(tmp / "m.png"), temporal_median(seq));
}

TEST(Cli, ExtractComposeDenoiseEvaluateReport) {
    TempDir tmp;
    const auto fx = make_fixture(tmp / "fx", 0, tiny());
    const auto d = [&](const std::string& s) { return (tmp / s).string(); };
    ASSERT_EQ(run({"extract-mask", "--in", d("fx/snowy"), "--out", d("masks"), "--x0", "4", "--y0", "2", "--width", "20",
                   "--height", "16"}),
              cli::kOk);
    const auto masks = load_mask_sequence(tmp / "masks");
    EXPECT_EQ(masks.geometry(), (Geometry{20, 16, 3}));
    EXPECT_EQ(masks.median_ref, "median.png");
    EXPECT_TRUE(fs::exists(tmp / "masks" / "median.png"));

    ASSERT_EQ(run({"--seed", "5", "compose", "--gt", d("fx/gt"), "--masks", d("masks"), "--out", d("comp"), "--out-len", "7"}),
              cli::kOk);
    EXPECT_EQ(list_sequence(tmp / "comp" / "snowy").files.size(), 7u);
    EXPECT_TRUE(fs::exists(tmp / "comp" / "overlay.json"));

    ASSERT_EQ(run({"denoise", "--in", d("fx/snowy"), "--out", d("den"), "--window", "3"}), cli::kOk);
    ASSERT_EQ(run({"evaluate", "--clean", d("fx/clean"), "--snowy", d("fx/snowy"), "--method", d("den"), "--label",
                   "baseline", "--out", d("m/den.csv")}),
              cli::kOk);
    ASSERT_EQ(run({"evaluate", "--clean", d("fx/clean"), "--snowy", d("fx/snowy"), "--method", d("fx/snowy"), "--label",
                   "snowy", "--out", d("m/snowy.csv"), "--sequence-id", "fx"}),
              cli::kOk);
    const auto csv = slurp(tmp / "m" / "den.csv");
    EXPECT_EQ(csv.rfind("sequence_id,method,t,keypoints,matches_prev,psnr_db,ssim\nfx,baseline,0,", 0), 0u);
    ASSERT_EQ(run({"report", "--metrics", d("m/den.csv"), d("m/snowy.csv"), "--chart", "matches_prev", "--smoothing", "3",
                   "--out", d("r/chart.svg"), "--summary", d("r/summary.csv")}),
              cli::kOk);
    EXPECT_NE(slurp(tmp / "r" / "chart.svg").find("<svg"), std::string::npos);
    EXPECT_NE(slurp(tmp / "r" / "summary.csv").find("fx,snowy,keypoints"), std::string::npos);
    EXPECT_EQ(run({"report", "--metrics", d("m/absent.csv")}), cli::kDataError);

    ASSERT_EQ(run({"evaluate", "--clean", d("fx/clean"), "--snowy", d("fx/snowy"), "--method", d("comp/snowy"), "--label",
                   "x", "--out", d("m/x.csv")}),
              cli::kDataError);
}

TEST(Cli, BuildDatasetSeedPrecedenceAndVerify) {
    TempDir tmp;
    make_fixture(tmp / "fx", 0, tiny());
    const auto d = [&](const std::string& s) { return (tmp / s).string(); };
    const std::vector<std::string> common{"build-dataset", "--clean-dir", d("fx/gt"), "--mask-dir", d("fx/masks"),
                                          "--n-train", "2", "--n-test", "1", "--out-len", "5"};
    auto with = [&](std::vector<std::string> pre, const std::string& out) {
        std::vector<std::string> a = pre;
        a.insert(a.end(), common.begin(), common.end());
        a.push_back("--out");
        a.push_back(d(out));
        return run(a);
    };
    ASSERT_EQ(with({"--seed", "7"}, "a"), cli::kOk);
    ASSERT_EQ(with({"--seed", "7", "--threads", "1"}, "b"), cli::kOk);
    EXPECT_EQ(tree_checksum(tmp / "a"), tree_checksum(tmp / "b"));
    EXPECT_EQ(read_manifest(tmp / "a" / kManifestName).master_seed, 7u);

    ::setenv("SNOWFORGE_SEED", "11", 1);
    ASSERT_EQ(with({}, "env"), cli::kOk);
    ASSERT_EQ(with({"--seed", "3"}, "flag"), cli::kOk);
    ::unsetenv("SNOWFORGE_SEED");
    EXPECT_EQ(read_manifest(tmp / "env" / kManifestName).master_seed, 11u);
    EXPECT_EQ(read_manifest(tmp / "flag" / kManifestName).master_seed, 3u);

    std::ofstream(tmp / "cfg.json") << "{\"seed\": 21, \"n_train\": 1, \"n_test\": 0}";
    ASSERT_EQ(with({"--config", d("cfg.json")}, "cfg"), cli::kOk);
    const auto m = read_manifest(tmp / "cfg" / kManifestName);
    EXPECT_EQ(m.master_seed, 21u);
    EXPECT_EQ(m.n_train, 2);  // flag beats the file

    EXPECT_EQ(with({"--seed", "7"}, "a"), cli::kDataError);  // non-empty output

    EXPECT_EQ(run({"verify", "--manifest", d("a/manifest.json"), "--recompute"}), cli::kOk);
    const auto rec = read_manifest(tmp / "a" / kManifestName).sequences[0];
    fs::remove(tmp / "a" / rec.relative_dir() / "clean" / "frame_000002.png");
    EXPECT_EQ(run({"verify", "--manifest", d("a/manifest.json")}), cli::kDataError);
}

TEST(Cli, FixtureCommand) {
    TempDir tmp;
    ASSERT_EQ(run({"fixture", "--out", (tmp / "fx").string()}), cli::kOk);
    EXPECT_TRUE(fs::exists(tmp / "fx" / "fixture.json"));
    EXPECT_EQ(list_sequence(tmp / "fx" / "snowy").files.size(), 64u);
}
