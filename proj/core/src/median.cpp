#include "snowforge/median.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "snowforge/parallel.hpp"

namespace snowforge {

namespace {

// Beyond this many frames a 256-bin count beats sorting the temporal samples.
constexpr std::size_t kHistogramThreshold = 12;
// Streamed medians keep one decoder per frame open when N is at most this.
constexpr std::size_t kMaxOpenReaders = 256;

std::uint8_t histogram_lower_median(std::span<const std::uint8_t* const> planes, std::size_t offset) {
    std::array<std::uint32_t, 256> counts{};
    for (const auto* p : planes) ++counts[p[offset]];
    const std::size_t rank = (planes.size() - 1) / 2;
    std::size_t seen = 0;
    for (std::size_t v = 0; v < 256; ++v) {
        seen += counts[v];
        if (seen > rank) return static_cast<std::uint8_t>(v);
    }
    return 255;
}

// Median over `planes` (one pointer per frame) for samples [0, count).
void median_of_planes(std::span<const std::uint8_t* const> planes, std::size_t count, std::uint8_t* out) {
    const std::size_t n = planes.size();
    if (n > kHistogramThreshold) {
        for (std::size_t s = 0; s < count; ++s) out[s] = histogram_lower_median(planes, s);
        return;
    }
    std::array<std::uint8_t, kHistogramThreshold> scratch{};
    for (std::size_t s = 0; s < count; ++s) {
        for (std::size_t k = 0; k < n; ++k) scratch[k] = planes[k][s];
        out[s] = lower_median(std::span(scratch.data(), n));
    }
}

}  // namespace

BandPlan BandPlan::with_height(int band_height, int frame_height) {
    if (band_height < 1 || frame_height < 1) {
        throw Error(Errc::InvalidArgument, "band height and frame height must be >= 1");
    }
    const int h = std::min(band_height, frame_height);
    return BandPlan{h, (frame_height + h - 1) / h};
}

BandPlan BandPlan::for_budget(const Geometry& g, std::size_t n_frames, std::size_t budget) {
    const std::size_t per_row = g.row_samples() * std::max<std::size_t>(n_frames, 1);
    if (per_row == 0 || budget < per_row) {
        throw Error(Errc::InvalidArgument, "memory budget of " + std::to_string(budget) +
                                               " bytes cannot hold one band row (" + std::to_string(per_row) +
                                               " bytes)");
    }
    const std::size_t rows = std::min<std::size_t>(budget / per_row, static_cast<std::size_t>(g.height));
    return with_height(static_cast<int>(rows), g.height);
}

std::uint8_t lower_median(std::span<std::uint8_t> values) {
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

Frame temporal_median(std::span<const Frame> frames) {
    if (frames.empty()) throw Error(Errc::EmptySequence, "temporal median of zero frames");
    const Geometry g = frames.front().geometry();
    require_uniform(frames, g);

    Frame out(g);
    const std::size_t row = g.row_samples();
    parallel_for(0, static_cast<std::size_t>(g.height), [&](std::size_t y) {
        std::vector<const std::uint8_t*> planes(frames.size());
        for (std::size_t k = 0; k < frames.size(); ++k) planes[k] = frames[k].row(static_cast<int>(y)).data();
        median_of_planes(planes, row, out.row(static_cast<int>(y)).data());
    });
    return out;
}

Frame temporal_median(const FrameSequence& seq) { return temporal_median(std::span(seq.frames())); }

Frame temporal_median_banded(const fs::path& dir, const BandPlan& plan, const FramePattern& pattern) {
    const auto listing = list_sequence(dir, pattern);
    const std::size_t n = listing.files.size();
    const bool keep_open = n <= kMaxOpenReaders;

    std::vector<std::optional<PngRowReader>> readers(n);
    auto open_checked = [&](std::size_t i, const Geometry* expect) -> PngRowReader {
        PngRowReader r(listing.files[i]);
        if (r.bit_depth() != 8) {
            throw Error(Errc::DecodeError, listing.files[i].string() + ": expected an 8-bit image");
        }
        if (expect != nullptr && r.geometry() != *expect) {
            throw Error(Errc::GeometryMismatch, listing.files[i].string() + " is " + describe(r.geometry()) +
                                                    ", sequence is " + describe(*expect));
        }
        return r;
    };

    readers[0].emplace(open_checked(0, nullptr));
    const Geometry g = readers[0]->geometry();
    if (!keep_open) readers[0].reset();
    // Validate every header up front so geometry errors surface before any work.
    parallel_for(1, n, [&](std::size_t i) {
        auto r = open_checked(i, &g);
        if (keep_open) readers[i].emplace(std::move(r));
    });

    const BandPlan bands = BandPlan::with_height(plan.band_height, g.height);
    const std::size_t row = g.row_samples();
    std::vector<std::uint8_t> buffer(static_cast<std::size_t>(bands.band_height) * row * n);
    Frame out(g);

    for (int b = 0; b < bands.band_count; ++b) {
        const int y0 = b * bands.band_height;
        const int rows = std::min(bands.band_height, g.height - y0);
        const std::size_t plane = static_cast<std::size_t>(rows) * row;

        parallel_for(0, n, [&](std::size_t i) {
            std::optional<PngRowReader> transient;
            PngRowReader* r = nullptr;
            if (keep_open) {
                r = &*readers[i];
            } else {
                transient.emplace(open_checked(i, &g));
                transient->skip_to(y0);
                r = &*transient;
            }
            std::uint8_t* dst = buffer.data() + i * plane;
            for (int y = 0; y < rows; ++y) r->read_row({dst + static_cast<std::size_t>(y) * row, row});
        });

        parallel_for(0, static_cast<std::size_t>(rows), [&](std::size_t y) {
            std::vector<const std::uint8_t*> planes(n);
            for (std::size_t k = 0; k < n; ++k) planes[k] = buffer.data() + k * plane + y * row;
            median_of_planes(planes, row, out.row(y0 + static_cast<int>(y)).data());
        });
    }
    return out;
}

}  // namespace snowforge
