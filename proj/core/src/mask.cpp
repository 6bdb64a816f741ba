#include "snowforge/mask.hpp"

#include <cstdlib>
#include <fstream>

#include "json.hpp"
#include "snowforge/median.hpp"
#include "snowforge/parallel.hpp"

namespace snowforge {

using ojson = nlohmann::ordered_json;

const Geometry& MaskSequence::geometry() const {
    if (masks.empty()) throw Error(Errc::EmptySequence, "mask sequence '" + source_id + "' is empty");
    return masks.front().geometry();
}

MaskSequence extract_mask_sequence(const FrameSequence& seq, const Frame& median, int noise_floor) {
    if (noise_floor < 0 || noise_floor > 255) {
        throw Error(Errc::InvalidArgument, "noise floor must lie in [0, 255]");
    }
    if (seq.geometry() != median.geometry()) {
        throw Error(Errc::GeometryMismatch, "median is " + describe(median.geometry()) + ", sequence is " +
                                                describe(seq.geometry()));
    }
    MaskSequence out;
    out.source_id = seq.source_id();
    out.noise_floor = noise_floor;
    out.masks.resize(seq.size());
    auto med = median.samples();
    parallel_for(0, seq.size(), [&](std::size_t t) {
        ResidualFrame m(seq.geometry());
        auto src = seq[t].samples();
        auto dst = m.samples();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            const int r = static_cast<int>(src[i]) - static_cast<int>(med[i]);
            dst[i] = static_cast<std::int16_t>(std::abs(r) <= noise_floor ? 0 : r);
        }
        out.masks[t] = std::move(m);
    });
    return out;
}

MaskSequence extract_patch_masks(const FrameSequence& seq, const Rect& rect, int noise_floor) {
    std::vector<Frame> patches(seq.size());
    parallel_for(0, seq.size(), [&](std::size_t t) { patches[t] = crop(seq[t], rect); });
    FrameSequence patch_seq(std::move(patches), seq.source_id());
    const Frame median = temporal_median(patch_seq);
    MaskSequence out = extract_mask_sequence(patch_seq, median, noise_floor);
    out.patch_x0 = rect.x0;
    out.patch_y0 = rect.y0;
    return out;
}

void save_mask_sequence(const fs::path& dir, const MaskSequence& masks) {
    const Geometry g = masks.geometry();
    fs::create_directories(dir);
    const FramePattern pattern;
    parallel_for(0, masks.size(), [&](std::size_t t) {
        save_frame16(dir / pattern.format(static_cast<long long>(t)), encode_mask(masks.masks[t]));
    });
    ojson meta;
    meta["source_id"] = masks.source_id;
    meta["patch_origin"] = {masks.patch_x0, masks.patch_y0};
    meta["patch_size"] = {g.width, g.height};
    meta["channels"] = g.channels;
    meta["noise_floor"] = masks.noise_floor;
    meta["frame_count"] = masks.size();
    meta["median_ref"] = masks.median_ref;
    std::ofstream out(dir / kMaskSidecar, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + (dir / kMaskSidecar).string());
    out << meta.dump(2) << '\n';
}

namespace {

ojson read_sidecar(const fs::path& dir) {
    std::ifstream in(dir / kMaskSidecar, std::ios::binary);
    if (!in) return ojson::object();
    try {
        return ojson::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SchemaError, (dir / kMaskSidecar).string() + ": " + e.what());
    }
}

}  // namespace

MaskSequence load_mask_sequence(const fs::path& dir) {
    const auto listing = list_sequence(dir);
    MaskSequence out;
    out.masks.resize(listing.files.size());
    parallel_for(0, listing.files.size(),
                 [&](std::size_t t) { out.masks[t] = decode_mask(load_frame16(listing.files[t])); });
    require_uniform<std::int16_t>(out.masks, out.masks.front().geometry());

    const ojson meta = read_sidecar(dir);
    try {
        out.source_id = meta.value("source_id", dir.filename().string());
        if (meta.contains("patch_origin")) {
            out.patch_x0 = meta["patch_origin"].at(0).get<int>();
            out.patch_y0 = meta["patch_origin"].at(1).get<int>();
        }
        out.noise_floor = meta.value("noise_floor", 0);
        out.median_ref = meta.value("median_ref", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SchemaError, (dir / kMaskSidecar).string() + ": " + e.what());
    }
    return out;
}

MaskInfo probe_mask_sequence(const fs::path& dir) {
    const auto listing = list_sequence(dir);
    PngRowReader first(listing.files.front());
    if (first.bit_depth() != 16) {
        throw Error(Errc::DecodeError, listing.files.front().string() + ": expected a 16-bit mask");
    }
    return MaskInfo{first.geometry(), listing.files.size()};
}

}  // namespace snowforge
