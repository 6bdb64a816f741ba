#include "snowforge/frame_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>

#include "snowforge/parallel.hpp"

namespace snowforge {

FramePattern::FramePattern(std::string_view pattern) {
    const auto pos = pattern.find('%');
    if (pos == std::string_view::npos) {
        throw Error(Errc::InvalidArgument, "pattern '" + std::string(pattern) + "' has no index field");
    }
    std::size_t i = pos + 1;
    if (i < pattern.size() && pattern[i] == '0') ++i;
    const std::size_t digits_begin = i;
    while (i < pattern.size() && pattern[i] >= '0' && pattern[i] <= '9') ++i;
    if (i >= pattern.size() || pattern[i] != 'd') {
        throw Error(Errc::InvalidArgument, "pattern '" + std::string(pattern) + "' must use %0Nd");
    }
    if (i > digits_begin) {
        std::from_chars(pattern.data() + digits_begin, pattern.data() + i, width_);
    }
    prefix_ = std::string(pattern.substr(0, pos));
    suffix_ = std::string(pattern.substr(i + 1));
    if (prefix_.find('%') != std::string::npos || suffix_.find('%') != std::string::npos) {
        throw Error(Errc::InvalidArgument, "pattern '" + std::string(pattern) + "' has several fields");
    }
}

std::string FramePattern::format(long long index) const {
    std::string digits = std::to_string(index);
    if (static_cast<int>(digits.size()) < width_) {
        digits.insert(0, static_cast<std::size_t>(width_) - digits.size(), '0');
    }
    return prefix_ + digits + suffix_;
}

std::optional<long long> FramePattern::parse(std::string_view name) const {
    if (name.size() <= prefix_.size() + suffix_.size()) return std::nullopt;
    if (!name.starts_with(prefix_) || !name.ends_with(suffix_)) return std::nullopt;
    const auto digits = name.substr(prefix_.size(), name.size() - prefix_.size() - suffix_.size());
    if (static_cast<int>(digits.size()) < width_) return std::nullopt;
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        return std::nullopt;
    }
    // Reject non-canonical spellings such as extra leading zeros.
    if (digits.size() > 1 && static_cast<int>(digits.size()) > width_ && digits.front() == '0') {
        return std::nullopt;
    }
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    return value;
}

SequenceListing list_sequence(const fs::path& dir, const FramePattern& pattern) {
    if (!fs::is_directory(dir)) {
        throw Error(Errc::IoError, dir.string() + " is not a directory");
    }
    std::map<long long, fs::path> found;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (auto idx = pattern.parse(entry.path().filename().string())) {
            found.emplace(*idx, entry.path());
        }
    }
    if (found.empty()) {
        throw Error(Errc::EmptySequence, "no frames matching the pattern in " + dir.string());
    }
    SequenceListing listing;
    listing.first_index = found.begin()->first;
    long long expected = listing.first_index;
    for (auto& [idx, path] : found) {
        if (idx != expected) throw MissingFrameError(expected, dir.string());
        listing.files.push_back(std::move(path));
        ++expected;
    }
    return listing;
}

FrameSequence load_sequence(const fs::path& dir, const FramePattern& pattern) {
    const auto listing = list_sequence(dir, pattern);
    std::vector<Frame> frames(listing.files.size());
    parallel_for(0, frames.size(), [&](std::size_t i) { frames[i] = load_frame(listing.files[i]); });
    const Geometry g = frames.front().geometry();
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].geometry() != g) {
            throw Error(Errc::GeometryMismatch, listing.files[i].string() + " is " +
                                                    describe(frames[i].geometry()) + ", sequence is " +
                                                    describe(g));
        }
    }
    auto name = fs::absolute(dir).lexically_normal().filename().string();
    if (name.empty()) name = fs::absolute(dir).lexically_normal().parent_path().filename().string();
    return FrameSequence(std::move(frames), name);
}

void save_sequence(const fs::path& dir, const FrameSequence& seq, const FramePattern& pattern) {
    fs::create_directories(dir);
    parallel_for(0, seq.size(), [&](std::size_t i) {
        save_frame(dir / pattern.format(static_cast<long long>(i)), seq[i]);
    });
}

Frame16 encode_mask(const ResidualFrame& m) {
    auto src = m.samples();
    std::vector<std::uint16_t> stored(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        stored[i] = static_cast<std::uint16_t>(src[i] + 255);
    }
    return Frame16(m.geometry(), std::move(stored));
}

ResidualFrame decode_mask(const Frame16& stored) {
    auto src = stored.samples();
    std::vector<std::int16_t> residual(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (src[i] > 510) {
            throw Error(Errc::MaskRangeError,
                        "stored sample " + std::to_string(src[i]) + " at offset " + std::to_string(i) +
                            " exceeds 510");
        }
        residual[i] = static_cast<std::int16_t>(static_cast<int>(src[i]) - 255);
    }
    return ResidualFrame(stored.geometry(), std::move(residual));
}

}  // namespace snowforge
