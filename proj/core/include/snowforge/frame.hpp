#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "snowforge/error.hpp"

namespace snowforge {

/// Raster shape shared by every frame kind. Samples are row-major and
/// channel-interleaved.
struct Geometry {
    int width{0};
    int height{0};
    int channels{0};

    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    std::size_t sample_count() const noexcept {
        return pixel_count() * static_cast<std::size_t>(channels);
    }
    std::size_t row_samples() const noexcept {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
    }

    bool operator==(const Geometry&) const = default;
};

std::string describe(const Geometry& g);

/// Throws GeometryMismatch when channels is not 1 or 3 or a side is < 1.
void validate_geometry(const Geometry& g);

/// Axis-aligned pixel rectangle.
struct Rect {
    int x0{0};
    int y0{0};
    int width{0};
    int height{0};

    bool operator==(const Rect&) const = default;
};

/// Traits describing the legal sample range of each frame kind.
template <typename T>
struct SampleRange;

template <>
struct SampleRange<std::uint8_t> {
    static constexpr int lo = 0;
    static constexpr int hi = 255;
};
template <>
struct SampleRange<std::int16_t> {
    static constexpr int lo = -255;
    static constexpr int hi = 255;
};
template <>
struct SampleRange<std::uint16_t> {
    static constexpr int lo = 0;
    static constexpr int hi = 65535;
};

/// Owning raster with a fixed geometry.
template <typename T>
class BasicFrame {
public:
    using value_type = T;

    BasicFrame() = default;

    /// Zero-filled frame.
    explicit BasicFrame(Geometry g) : geom_(g) {
        validate_geometry(g);
        data_.assign(g.sample_count(), T{});
    }

    BasicFrame(Geometry g, std::vector<T> data) : geom_(g), data_(std::move(data)) {
        validate_geometry(g);
        if (data_.size() != g.sample_count()) {
            throw Error(Errc::GeometryMismatch, "buffer holds " + std::to_string(data_.size()) +
                                                    " samples, geometry " + describe(g) +
                                                    " needs " + std::to_string(g.sample_count()));
        }
        if constexpr (SampleRange<T>::lo != 0 || SampleRange<T>::hi != 255 || sizeof(T) != 1) {
            for (T v : data_) {
                if (static_cast<int>(v) < SampleRange<T>::lo || static_cast<int>(v) > SampleRange<T>::hi) {
                    throw Error(Errc::MaskRangeError, "sample " + std::to_string(v) + " outside [" +
                                                          std::to_string(SampleRange<T>::lo) + ", " +
                                                          std::to_string(SampleRange<T>::hi) + "]");
                }
            }
        }
    }

    const Geometry& geometry() const noexcept { return geom_; }
    int width() const noexcept { return geom_.width; }
    int height() const noexcept { return geom_.height; }
    int channels() const noexcept { return geom_.channels; }
    bool empty() const noexcept { return data_.empty(); }

    std::span<const T> samples() const noexcept { return data_; }
    std::span<T> samples() noexcept { return data_; }

    std::span<const T> row(int y) const noexcept {
        return std::span<const T>(data_).subspan(static_cast<std::size_t>(y) * geom_.row_samples(),
                                                 geom_.row_samples());
    }
    std::span<T> row(int y) noexcept {
        return std::span<T>(data_).subspan(static_cast<std::size_t>(y) * geom_.row_samples(),
                                           geom_.row_samples());
    }

    T at(int x, int y, int c = 0) const noexcept { return data_[index(x, y, c)]; }
    T& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }

    bool operator==(const BasicFrame&) const = default;

private:
    std::size_t index(int x, int y, int c) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(geom_.width) +
                static_cast<std::size_t>(x)) *
                   static_cast<std::size_t>(geom_.channels) +
               static_cast<std::size_t>(c);
    }

    Geometry geom_{};
    std::vector<T> data_;
};

/// 8-bit image, 1 (luma) or 3 (RGB) channels.
using Frame = BasicFrame<std::uint8_t>;
/// Signed snow residual, every sample in [-255, 255].
using ResidualFrame = BasicFrame<std::int16_t>;
/// 16-bit storage image used to persist residuals.
using Frame16 = BasicFrame<std::uint16_t>;

/// Ordered frames of one clip; never empty, geometry uniform.
class FrameSequence {
public:
    FrameSequence() = default;
    FrameSequence(std::vector<Frame> frames, std::string source_id = {});

    const std::vector<Frame>& frames() const noexcept { return frames_; }
    const std::string& source_id() const noexcept { return source_id_; }
    std::size_t size() const noexcept { return frames_.size(); }
    bool empty() const noexcept { return frames_.empty(); }
    const Frame& operator[](std::size_t i) const { return frames_[i]; }
    const Geometry& geometry() const;

    auto begin() const noexcept { return frames_.begin(); }
    auto end() const noexcept { return frames_.end(); }

private:
    std::vector<Frame> frames_;
    std::string source_id_;
};

/// Throws GeometryMismatch unless every frame in the span has geometry `g`.
template <typename T>
void require_uniform(std::span<const BasicFrame<T>> frames, const Geometry& g) {
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].geometry() != g) {
            throw Error(Errc::GeometryMismatch, "frame " + std::to_string(i) + " is " +
                                                    describe(frames[i].geometry()) + ", expected " +
                                                    describe(g));
        }
    }
}

/// Copies the w x h rectangle at (x0, y0). Throws CropOutOfBounds.
template <typename T>
BasicFrame<T> crop(const BasicFrame<T>& f, const Rect& r) {
    if (r.x0 < 0 || r.y0 < 0 || r.width < 1 || r.height < 1 ||
        static_cast<long long>(r.x0) + r.width > f.width() ||
        static_cast<long long>(r.y0) + r.height > f.height()) {
        throw Error(Errc::CropOutOfBounds,
                    "rect (" + std::to_string(r.x0) + ", " + std::to_string(r.y0) + ", " +
                        std::to_string(r.width) + ", " + std::to_string(r.height) + ") exceeds " +
                        describe(f.geometry()));
    }
    BasicFrame<T> out(Geometry{r.width, r.height, f.channels()});
    const std::size_t ch = static_cast<std::size_t>(f.channels());
    for (int y = 0; y < r.height; ++y) {
        auto src = f.row(r.y0 + y).subspan(static_cast<std::size_t>(r.x0) * ch, out.geometry().row_samples());
        auto dst = out.row(y);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return out;
}

inline Frame crop(const Frame& f, int x0, int y0, int w, int h) { return crop(f, Rect{x0, y0, w, h}); }

/// BT.601 luma with round-half-up: (299 R + 587 G + 114 B + 500) / 1000.
inline std::uint8_t luma_of(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

/// Single-channel copy of `f`; 1-channel input is returned unchanged.
Frame to_luma(const Frame& f);

}  // namespace snowforge
