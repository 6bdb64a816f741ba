#include <png.h>

#include <cstdio>
#include <cstring>

#include "snowforge/frame_io.hpp"

// libpng reports errors by longjmp. Every function below that calls into
// libpng installs its own setjmp point and keeps only trivially destructible
// locals alive across it; errors are turned into exceptions after the jump.

namespace snowforge {

namespace {

struct PngHandle {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    bool writing = false;
    char message[256] = {0};
};

void on_error(png_structp png, png_const_charp msg) {
    auto* h = static_cast<PngHandle*>(png_get_error_ptr(png));
    if (h != nullptr) {
        std::snprintf(h->message, sizeof(h->message), "%s", msg);
    }
    png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

void close_handle(PngHandle& h) noexcept {
    if (h.png != nullptr) {
        if (h.writing) {
            png_destroy_write_struct(&h.png, &h.info);
        } else {
            png_destroy_read_struct(&h.png, &h.info, nullptr);
        }
    }
    h.png = nullptr;
    h.info = nullptr;
    if (h.fp != nullptr) std::fclose(h.fp);
    h.fp = nullptr;
}

struct ReadInfo {
    int width;
    int height;
    int channels;
    int bit_depth;
    int interlaced;
};

// Returns false with h->message set on failure.
bool open_for_read(PngHandle* h, const char* path, ReadInfo* out) {
    h->fp = std::fopen(path, "rb");
    if (h->fp == nullptr) {
        std::snprintf(h->message, sizeof(h->message), "cannot open file");
        return false;
    }
    png_byte sig[8];
    if (std::fread(sig, 1, 8, h->fp) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        std::snprintf(h->message, sizeof(h->message), "not a PNG file");
        return false;
    }
    h->png = png_create_read_struct(PNG_LIBPNG_VER_STRING, h, on_error, on_warning);
    if (h->png == nullptr) {
        std::snprintf(h->message, sizeof(h->message), "png_create_read_struct failed");
        return false;
    }
    h->info = png_create_info_struct(h->png);
    if (h->info == nullptr) {
        std::snprintf(h->message, sizeof(h->message), "png_create_info_struct failed");
        return false;
    }
    if (setjmp(png_jmpbuf(h->png))) {
        return false;
    }
    png_init_io(h->png, h->fp);
    png_set_sig_bytes(h->png, 8);
    png_read_info(h->png, h->info);

    const int color = png_get_color_type(h->png, h->info);
    const int depth = png_get_bit_depth(h->png, h->info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(h->png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(h->png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(h->png);
    out->interlaced = png_get_interlace_type(h->png, h->info) != PNG_INTERLACE_NONE ? 1 : 0;
    if (out->interlaced) png_set_interlace_handling(h->png);
    png_read_update_info(h->png, h->info);

    out->width = static_cast<int>(png_get_image_width(h->png, h->info));
    out->height = static_cast<int>(png_get_image_height(h->png, h->info));
    out->channels = png_get_channels(h->png, h->info);
    out->bit_depth = png_get_bit_depth(h->png, h->info);
    return true;
}

bool read_rows(PngHandle* h, png_bytepp rows, png_uint_32 count) {
    if (setjmp(png_jmpbuf(h->png))) {
        return false;
    }
    png_read_rows(h->png, rows, nullptr, count);
    return true;
}

bool read_image(PngHandle* h, png_bytepp rows) {
    if (setjmp(png_jmpbuf(h->png))) {
        return false;
    }
    png_read_image(h->png, rows);
    return true;
}

bool write_png(PngHandle* h, const char* path, int width, int height, int channels, int bit_depth,
               png_bytepp rows) {
    h->writing = true;
    h->fp = std::fopen(path, "wb");
    if (h->fp == nullptr) {
        std::snprintf(h->message, sizeof(h->message), "cannot create file");
        return false;
    }
    h->png = png_create_write_struct(PNG_LIBPNG_VER_STRING, h, on_error, on_warning);
    if (h->png == nullptr) {
        std::snprintf(h->message, sizeof(h->message), "png_create_write_struct failed");
        return false;
    }
    h->info = png_create_info_struct(h->png);
    if (h->info == nullptr) {
        std::snprintf(h->message, sizeof(h->message), "png_create_info_struct failed");
        return false;
    }
    if (setjmp(png_jmpbuf(h->png))) {
        return false;
    }
    png_init_io(h->png, h->fp);
    png_set_compression_level(h->png, 6);
    png_set_IHDR(h->png, h->info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 bit_depth, channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(h->png, h->info);
    png_write_image(h->png, rows);
    png_write_end(h->png, nullptr);
    return true;
}

[[noreturn]] void fail(Errc code, const fs::path& path, const PngHandle& h) {
    throw Error(code, path.string() + ": " + h.message);
}

void write_file(const fs::path& path, const Geometry& g, int bit_depth, std::span<const std::uint8_t> bytes) {
    const std::size_t row_bytes = g.row_samples() * static_cast<std::size_t>(bit_depth / 8);
    std::vector<png_bytep> rows(static_cast<std::size_t>(g.height));
    for (std::size_t y = 0; y < rows.size(); ++y) {
        rows[y] = const_cast<png_bytep>(bytes.data() + y * row_bytes);
    }
    PngHandle h;
    const std::string p = path.string();
    const bool ok = write_png(&h, p.c_str(), g.width, g.height, g.channels, bit_depth, rows.data());
    const bool closed_ok = [&] {
        if (h.png != nullptr) png_destroy_write_struct(&h.png, &h.info);
        if (h.fp == nullptr) return ok;
        const bool flushed = std::fclose(h.fp) == 0;
        h.fp = nullptr;
        return flushed;
    }();
    if (!ok) fail(Errc::IoError, path, h);
    if (!closed_ok) throw Error(Errc::IoError, p + ": write failed");
}

}  // namespace

struct PngRowReader::Impl {
    PngHandle handle;
    fs::path path;
    Geometry geom;
    int bit_depth = 8;
    int next_row = 0;
    std::vector<std::uint8_t> full;  // interlaced images only

    std::size_t row_bytes() const { return geom.row_samples() * static_cast<std::size_t>(bit_depth / 8); }

    ~Impl() { close_handle(handle); }
};

PngRowReader::PngRowReader(const fs::path& path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    ReadInfo info{};
    const std::string p = path.string();
    if (!open_for_read(&impl_->handle, p.c_str(), &info)) {
        const bool missing = !fs::exists(path);
        fail(missing ? Errc::IoError : Errc::DecodeError, path, impl_->handle);
    }
    if (info.channels != 1 && info.channels != 3) {
        throw Error(Errc::DecodeError, p + ": unsupported channel count " + std::to_string(info.channels));
    }
    if (info.bit_depth != 8 && info.bit_depth != 16) {
        throw Error(Errc::DecodeError, p + ": unsupported bit depth " + std::to_string(info.bit_depth));
    }
    impl_->geom = Geometry{info.width, info.height, info.channels};
    impl_->bit_depth = info.bit_depth;
    if (info.interlaced) {
        const std::size_t rb = impl_->row_bytes();
        impl_->full.resize(rb * static_cast<std::size_t>(info.height));
        std::vector<png_bytep> rows(static_cast<std::size_t>(info.height));
        for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = impl_->full.data() + y * rb;
        if (!read_image(&impl_->handle, rows.data())) fail(Errc::DecodeError, path, impl_->handle);
    }
}

PngRowReader::~PngRowReader() = default;
PngRowReader::PngRowReader(PngRowReader&&) noexcept = default;
PngRowReader& PngRowReader::operator=(PngRowReader&&) noexcept = default;

const Geometry& PngRowReader::geometry() const noexcept { return impl_->geom; }
int PngRowReader::bit_depth() const noexcept { return impl_->bit_depth; }
int PngRowReader::next_row() const noexcept { return impl_->next_row; }
std::size_t PngRowReader::row_bytes() const noexcept { return impl_->row_bytes(); }

void PngRowReader::read_row(std::span<std::uint8_t> out) {
    const std::size_t rb = impl_->row_bytes();
    if (out.size() != rb) {
        throw Error(Errc::InvalidArgument, "row buffer size mismatch");
    }
    if (impl_->next_row >= impl_->geom.height) {
        throw Error(Errc::DecodeError, impl_->path.string() + ": read past last row");
    }
    if (!impl_->full.empty()) {
        std::memcpy(out.data(), impl_->full.data() + static_cast<std::size_t>(impl_->next_row) * rb, rb);
    } else {
        png_bytep row = out.data();
        if (!read_rows(&impl_->handle, &row, 1)) fail(Errc::DecodeError, impl_->path, impl_->handle);
    }
    ++impl_->next_row;
}

void PngRowReader::skip_to(int y) {
    if (y < impl_->next_row) {
        throw Error(Errc::InvalidArgument, "cannot rewind a row reader");
    }
    std::vector<std::uint8_t> scratch(impl_->row_bytes());
    while (impl_->next_row < y) read_row(scratch);
}

namespace {

std::vector<std::uint8_t> read_all(PngRowReader& reader) {
    const std::size_t rb = reader.row_bytes();
    std::vector<std::uint8_t> bytes(rb * static_cast<std::size_t>(reader.geometry().height));
    for (int y = 0; y < reader.geometry().height; ++y) {
        reader.read_row(std::span(bytes).subspan(static_cast<std::size_t>(y) * rb, rb));
    }
    return bytes;
}

}  // namespace

Frame load_frame(const fs::path& path) {
    PngRowReader reader(path);
    if (reader.bit_depth() != 8) {
        throw Error(Errc::DecodeError, path.string() + ": expected an 8-bit image");
    }
    const Geometry g = reader.geometry();
    return Frame(g, read_all(reader));
}

Frame16 load_frame16(const fs::path& path) {
    PngRowReader reader(path);
    if (reader.bit_depth() != 16) {
        throw Error(Errc::DecodeError, path.string() + ": expected a 16-bit image");
    }
    const Geometry g = reader.geometry();
    const auto bytes = read_all(reader);
    std::vector<std::uint16_t> samples(g.sample_count());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i] = static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
    }
    return Frame16(g, std::move(samples));
}

Geometry probe_frame(const fs::path& path) { return PngRowReader(path).geometry(); }

void save_frame(const fs::path& path, const Frame& f) { write_file(path, f.geometry(), 8, f.samples()); }

void save_frame16(const fs::path& path, const Frame16& f) {
    auto samples = f.samples();
    std::vector<std::uint8_t> bytes(samples.size() * 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        bytes[2 * i] = static_cast<std::uint8_t>(samples[i] >> 8);
        bytes[2 * i + 1] = static_cast<std::uint8_t>(samples[i] & 0xFF);
    }
    write_file(path, f.geometry(), 16, bytes);
}

}  // namespace snowforge
