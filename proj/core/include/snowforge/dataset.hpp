#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "snowforge/overlay.hpp"

namespace snowforge {

namespace fs = std::filesystem;

/// Inputs of a dataset build. Defaults reproduce a 310-sequence dataset of
/// 310 x 269 = 83,390 paired frames.
struct DatasetConfig {
    std::vector<fs::path> clean_sources;  ///< 8-bit frame_%06d.png directories
    std::vector<fs::path> mask_sources;   ///< directories written by save_mask_sequence
    int n_train{300};
    int n_test{10};
    long long out_len{269};
    std::uint64_t master_seed{0};
    fs::path out_dir;
};

struct FrameChecksums {
    std::uint64_t snowy_first{0};
    std::uint64_t snowy_last{0};
    std::uint64_t clean_first{0};
    std::uint64_t clean_last{0};

    bool operator==(const FrameChecksums&) const = default;
};

struct SequenceRecord {
    std::string sequence_id;
    std::string split;  ///< "train" or "test"
    std::string clean_source;
    std::string mask_source;
    SequenceShape clean_shape;
    SequenceShape mask_shape;
    int channels{3};
    OverlaySpec overlay;
    long long frame_count{0};
    FrameChecksums checksums;

    /// <split>/<sequence_id>, relative to the dataset root.
    fs::path relative_dir() const { return fs::path(split) / sequence_id; }
};

struct DatasetManifest {
    static constexpr int kSchemaVersion = 1;

    int schema_version{kSchemaVersion};
    std::uint64_t master_seed{0};
    long long out_len{0};
    int n_train{0};
    int n_test{0};
    std::vector<std::string> clean_sources;
    std::vector<std::string> mask_sources;
    std::vector<SequenceRecord> sequences;

    long long total_pairs() const noexcept;
};

inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kInvalidMarker = "INVALID";

/// Fixed-key-order JSON document, two-space indented, trailing newline.
std::string manifest_to_json(const DatasetManifest& m);
/// Throws SchemaError.
DatasetManifest manifest_from_json(const std::string& text);
DatasetManifest read_manifest(const fs::path& path);

/// `dir` itself when it holds frame_%06d.png files, otherwise its
/// immediate subdirectories that do, sorted by name.
std::vector<fs::path> discover_sources(const fs::path& dir);

/// Generates n_train + n_test paired sequences under cfg.out_dir:
///   <out>/<split>/<seq_id>/{snowy,clean}/frame_%06d.png and <out>/manifest.json.
/// Sequence i draws from SplitMix64(stream_seed(master_seed, i)): clean
/// source index, mask source index, then the overlay spec. The manifest is
/// written after every frame is on disk. On failure <out>/INVALID is created
/// and the error rethrown. cfg.out_dir must be absent or empty.
DatasetManifest build_dataset(const DatasetConfig& cfg);

struct SequenceVerdict {
    std::string sequence_id;
    bool ok{true};
    std::vector<std::string> problems;
};

struct VerifyReport {
    std::vector<std::string> dataset_problems;
    std::vector<SequenceVerdict> sequences;
    long long frames_checked{0};

    bool passed() const noexcept;
};

struct VerifyOptions {
    /// Recompose the first and last pair of every sequence from the recorded
    /// sources and compare samples with what is on disk.
    bool recompute{false};
};

/// Re-checks frame counts, geometry, decodability, checksums and overlay
/// bounds. Never throws for data problems; they become report entries.
VerifyReport verify_dataset(const fs::path& manifest_path, const VerifyOptions& options = {});

}  // namespace snowforge
