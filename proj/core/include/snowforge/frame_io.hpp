#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snowforge/frame.hpp"

namespace snowforge {

namespace fs = std::filesystem;

/// printf-style filename template with exactly one zero-padded index field,
/// e.g. "frame_%06d.png".
class FramePattern {
public:
    static constexpr std::string_view kDefault = "frame_%06d.png";

    explicit FramePattern(std::string_view pattern = kDefault);

    std::string format(long long index) const;
    /// Index encoded in `filename`, or nullopt when it does not match.
    std::optional<long long> parse(std::string_view filename) const;

private:
    std::string prefix_;
    std::string suffix_;
    int width_{0};
};

/// Paths of a contiguous on-disk sequence, ordered by index.
struct SequenceListing {
    long long first_index{0};
    std::vector<fs::path> files;
};

/// Enumerates `dir` without decoding. Throws MissingFrame on an index gap
/// and EmptySequence when nothing matches.
SequenceListing list_sequence(const fs::path& dir, const FramePattern& pattern = FramePattern{});

// Single images. 8-bit loaders reject 16-bit files and vice versa
// (DecodeError). Alpha is stripped, palettes and low bit depths expanded.
Frame load_frame(const fs::path& path);
Frame16 load_frame16(const fs::path& path);
/// Width/height/channels from the header only.
Geometry probe_frame(const fs::path& path);
void save_frame(const fs::path& path, const Frame& f);
void save_frame16(const fs::path& path, const Frame16& f);

/// Loads every frame of a sequence directory, decoding files in parallel.
/// source_id defaults to the directory name.
FrameSequence load_sequence(const fs::path& dir, const FramePattern& pattern = FramePattern{});
/// Writes frame_%06d.png starting at index 0; creates `dir`.
void save_sequence(const fs::path& dir, const FrameSequence& seq,
                   const FramePattern& pattern = FramePattern{});

/// Bias encoding of residuals: stored = residual + 255, range [0, 510].
Frame16 encode_mask(const ResidualFrame& m);
/// Inverse of encode_mask. Throws MaskRangeError for stored samples > 510.
ResidualFrame decode_mask(const Frame16& stored);

/// Streams rows of one PNG file without decoding the whole image up front.
/// Interlaced files are decoded fully on open.
class PngRowReader {
public:
    explicit PngRowReader(const fs::path& path);
    ~PngRowReader();
    PngRowReader(const PngRowReader&) = delete;
    PngRowReader& operator=(const PngRowReader&) = delete;
    PngRowReader(PngRowReader&&) noexcept;
    PngRowReader& operator=(PngRowReader&&) noexcept;

    const Geometry& geometry() const noexcept;
    int bit_depth() const noexcept;
    int next_row() const noexcept;
    /// Bytes per decoded row; 16-bit samples are big-endian.
    std::size_t row_bytes() const noexcept;
    /// Decodes the next row into `out` (row_bytes() bytes).
    void read_row(std::span<std::uint8_t> out);
    /// Decodes and discards rows until next_row() == y.
    void skip_to(int y);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace snowforge
