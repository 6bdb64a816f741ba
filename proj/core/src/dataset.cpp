#include "snowforge/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "snowforge/checksum.hpp"
#include "snowforge/frame_io.hpp"
#include "snowforge/log.hpp"
#include "snowforge/parallel.hpp"

namespace snowforge {

using ojson = nlohmann::ordered_json;

long long DatasetManifest::total_pairs() const noexcept {
    long long total = 0;
    for (const auto& r : sequences) total += r.frame_count;
    return total;
}

bool VerifyReport::passed() const noexcept {
    return dataset_problems.empty() &&
           std::all_of(sequences.begin(), sequences.end(), [](const SequenceVerdict& v) { return v.ok; });
}

// ---------------------------------------------------------------------------
// Manifest serialization

namespace {

ojson shape_json(const SequenceShape& s) { return ojson{{"width", s.width}, {"height", s.height}, {"frames", s.frames}}; }

SequenceShape shape_from(const ojson& j) {
    return {j.at("width").get<int>(), j.at("height").get<int>(), j.at("frames").get<long long>()};
}

std::uint64_t parse_hex(const std::string& s) {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 16);
    if (used != s.size() || s.size() != 16) throw std::invalid_argument("bad checksum '" + s + "'");
    return v;
}

}  // namespace

std::string manifest_to_json(const DatasetManifest& m) {
    ojson doc;
    doc["schema_version"] = m.schema_version;
    doc["master_seed"] = m.master_seed;
    doc["out_len"] = m.out_len;
    doc["n_train"] = m.n_train;
    doc["n_test"] = m.n_test;
    doc["total_pairs"] = m.total_pairs();
    doc["clean_sources"] = m.clean_sources;
    doc["mask_sources"] = m.mask_sources;
    ojson seqs = ojson::array();
    for (const auto& r : m.sequences) {
        ojson j;
        j["sequence_id"] = r.sequence_id;
        j["split"] = r.split;
        j["clean_source"] = r.clean_source;
        j["mask_source"] = r.mask_source;
        j["clean_shape"] = shape_json(r.clean_shape);
        j["mask_shape"] = shape_json(r.mask_shape);
        j["channels"] = r.channels;
        j["overlay"] = ojson{{"dx", r.overlay.dx},
                             {"dy", r.overlay.dy},
                             {"t_start", r.overlay.t_start},
                             {"mask_phase", r.overlay.mask_phase},
                             {"out_len", r.overlay.out_len},
                             {"seed", r.overlay.seed}};
        j["frame_count"] = r.frame_count;
        j["checksums"] = ojson{{"snowy_first", to_hex(r.checksums.snowy_first)},
                               {"snowy_last", to_hex(r.checksums.snowy_last)},
                               {"clean_first", to_hex(r.checksums.clean_first)},
                               {"clean_last", to_hex(r.checksums.clean_last)}};
        seqs.push_back(std::move(j));
    }
    doc["sequences"] = std::move(seqs);
    return doc.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text) {
    try {
        const ojson doc = ojson::parse(text);
        DatasetManifest m;
        m.schema_version = doc.at("schema_version").get<int>();
        if (m.schema_version != DatasetManifest::kSchemaVersion) {
            throw Error(Errc::SchemaError, "unsupported schema_version " + std::to_string(m.schema_version));
        }
        m.master_seed = doc.at("master_seed").get<std::uint64_t>();
        m.out_len = doc.at("out_len").get<long long>();
        m.n_train = doc.at("n_train").get<int>();
        m.n_test = doc.at("n_test").get<int>();
        m.clean_sources = doc.at("clean_sources").get<std::vector<std::string>>();
        m.mask_sources = doc.at("mask_sources").get<std::vector<std::string>>();
        for (const auto& j : doc.at("sequences")) {
            SequenceRecord r;
            r.sequence_id = j.at("sequence_id").get<std::string>();
            r.split = j.at("split").get<std::string>();
            r.clean_source = j.at("clean_source").get<std::string>();
            r.mask_source = j.at("mask_source").get<std::string>();
            r.clean_shape = shape_from(j.at("clean_shape"));
            r.mask_shape = shape_from(j.at("mask_shape"));
            r.channels = j.at("channels").get<int>();
            const auto& o = j.at("overlay");
            r.overlay.dx = o.at("dx").get<int>();
            r.overlay.dy = o.at("dy").get<int>();
            r.overlay.t_start = o.at("t_start").get<long long>();
            r.overlay.mask_phase = o.at("mask_phase").get<long long>();
            r.overlay.out_len = o.at("out_len").get<long long>();
            r.overlay.seed = o.at("seed").get<std::uint64_t>();
            r.frame_count = j.at("frame_count").get<long long>();
            const auto& c = j.at("checksums");
            r.checksums.snowy_first = parse_hex(c.at("snowy_first").get<std::string>());
            r.checksums.snowy_last = parse_hex(c.at("snowy_last").get<std::string>());
            r.checksums.clean_first = parse_hex(c.at("clean_first").get<std::string>());
            r.checksums.clean_last = parse_hex(c.at("clean_last").get<std::string>());
            m.sequences.push_back(std::move(r));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SchemaError, e.what());
    } catch (const std::invalid_argument& e) {
        throw Error(Errc::SchemaError, e.what());
    } catch (const std::out_of_range& e) {
        throw Error(Errc::SchemaError, e.what());
    }
}

DatasetManifest read_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return manifest_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Build

std::vector<fs::path> discover_sources(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(Errc::IoError, dir.string() + " is not a directory");
    const FramePattern pattern;
    auto has_frames = [&](const fs::path& d) {
        for (const auto& e : fs::directory_iterator(d)) {
            if (e.is_regular_file() && pattern.parse(e.path().filename().string())) return true;
        }
        return false;
    };
    if (has_frames(dir)) return {dir};
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_directory() && has_frames(e.path())) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) throw Error(Errc::EmptySequence, "no frame sequences under " + dir.string());
    return out;
}

namespace {

struct CleanSource {
    std::string name;
    std::vector<fs::path> files;
    Geometry geometry;
};

struct MaskSource {
    std::string name;
    std::vector<fs::path> files;
    Geometry geometry;
};

struct Plan {
    SequenceRecord record;
    std::size_t clean_index;
    std::size_t mask_index;
};

std::string sequence_id(std::size_t i) {
    std::string digits = std::to_string(i);
    if (digits.size() < 5) digits.insert(0, 5 - digits.size(), '0');
    return "seq_" + digits;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << text;
    out.close();
    if (!out) throw Error(Errc::IoError, "failed writing " + path.string());
}

Frame load_clean_frame(const CleanSource& src, long long index) {
    const auto& path = src.files[static_cast<std::size_t>(index)];
    Frame f = load_frame(path);
    if (f.geometry() != src.geometry) {
        throw Error(Errc::GeometryMismatch,
                    path.string() + " is " + describe(f.geometry()) + ", source is " + describe(src.geometry));
    }
    return f;
}

ResidualFrame load_mask_frame(const MaskSource& src, long long index) {
    const auto& path = src.files[static_cast<std::size_t>(index)];
    ResidualFrame m = decode_mask(load_frame16(path));
    if (m.geometry() != src.geometry) {
        throw Error(Errc::GeometryMismatch,
                    path.string() + " is " + describe(m.geometry()) + ", mask source is " + describe(src.geometry));
    }
    return m;
}

void generate_sequence(const fs::path& out_root, Plan& plan, const CleanSource& clean, const MaskSource& mask) {
    auto& rec = plan.record;
    const fs::path base = out_root / rec.relative_dir();
    const fs::path snowy_dir = base / "snowy";
    const fs::path clean_dir = base / "clean";
    fs::create_directories(snowy_dir);
    fs::create_directories(clean_dir);
    const FramePattern pattern;
    const auto& s = rec.overlay;
    for (long long t = 0; t < s.out_len; ++t) {
        const Frame gt = load_clean_frame(clean, s.t_start + t);
        const ResidualFrame m = load_mask_frame(mask, (s.mask_phase + t) % rec.mask_shape.frames);
        const auto pair = compose_frame(gt, m, s.dx, s.dy);
        const auto name = pattern.format(t);
        save_frame(snowy_dir / name, pair.snowy);
        save_frame(clean_dir / name, pair.clean);
    }
    const auto first = pattern.format(0);
    const auto last = pattern.format(s.out_len - 1);
    rec.checksums.snowy_first = file_checksum(snowy_dir / first);
    rec.checksums.snowy_last = file_checksum(snowy_dir / last);
    rec.checksums.clean_first = file_checksum(clean_dir / first);
    rec.checksums.clean_last = file_checksum(clean_dir / last);
    rec.frame_count = s.out_len;
}

}  // namespace

DatasetManifest build_dataset(const DatasetConfig& cfg) {
    if (cfg.clean_sources.empty() || cfg.mask_sources.empty()) {
        throw Error(Errc::InvalidArgument, "clean and mask source lists must be non-empty");
    }
    if (cfg.n_train < 0 || cfg.n_test < 0) throw Error(Errc::InvalidArgument, "split sizes must be >= 0");
    if (cfg.out_len < 1) throw Error(Errc::InvalidArgument, "out_len must be >= 1");
    if (cfg.out_dir.empty()) throw Error(Errc::InvalidArgument, "output directory not set");
    if (fs::exists(cfg.out_dir) && !fs::is_empty(cfg.out_dir)) {
        throw Error(Errc::IoError, "output directory " + cfg.out_dir.string() + " is not empty");
    }

    std::vector<CleanSource> cleans;
    for (const auto& p : cfg.clean_sources) {
        auto listing = list_sequence(p);
        const Geometry g = probe_frame(listing.files.front());
        cleans.push_back({p.generic_string(), std::move(listing.files), g});
    }
    std::vector<MaskSource> masks;
    for (const auto& p : cfg.mask_sources) {
        auto listing = list_sequence(p);
        PngRowReader first(listing.files.front());
        if (first.bit_depth() != 16) {
            throw Error(Errc::DecodeError, listing.files.front().string() + ": mask frames must be 16-bit");
        }
        masks.push_back({p.generic_string(), std::move(listing.files), first.geometry()});
    }

    DatasetManifest manifest;
    manifest.master_seed = cfg.master_seed;
    manifest.out_len = cfg.out_len;
    manifest.n_train = cfg.n_train;
    manifest.n_test = cfg.n_test;
    for (const auto& c : cleans) manifest.clean_sources.push_back(c.name);
    for (const auto& m : masks) manifest.mask_sources.push_back(m.name);

    // All random draws happen here, single-threaded, so generation order
    // cannot influence them.
    const std::size_t total = static_cast<std::size_t>(cfg.n_train) + static_cast<std::size_t>(cfg.n_test);
    std::vector<Plan> plans;
    plans.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        const std::uint64_t seed = stream_seed(cfg.master_seed, i);
        SplitMix64 rng(seed);
        const auto ci = static_cast<std::size_t>(rng.bounded(cleans.size()));
        const auto mi = static_cast<std::size_t>(rng.bounded(masks.size()));
        const auto& c = cleans[ci];
        const auto& m = masks[mi];
        Plan plan{{}, ci, mi};
        auto& rec = plan.record;
        rec.sequence_id = sequence_id(i);
        rec.split = i < static_cast<std::size_t>(cfg.n_train) ? "train" : "test";
        rec.clean_source = c.name;
        rec.mask_source = m.name;
        rec.clean_shape = {c.geometry.width, c.geometry.height, static_cast<long long>(c.files.size())};
        rec.mask_shape = {m.geometry.width, m.geometry.height, static_cast<long long>(m.files.size())};
        rec.channels = c.geometry.channels;
        if (c.geometry.channels != m.geometry.channels) {
            throw Error(Errc::GeometryMismatch, rec.sequence_id + ": clean '" + c.name + "' has " +
                                                      std::to_string(c.geometry.channels) + " channels, mask '" +
                                                      m.name + "' has " + std::to_string(m.geometry.channels));
        }
        try {
            rec.overlay = draw_overlay_spec(rng, rec.clean_shape, rec.mask_shape, cfg.out_len);
        } catch (const Error& e) {
            throw Error(e.code(), rec.sequence_id + " pairs clean '" + c.name + "' with mask '" + m.name +
                                      "': " + e.what());
        }
        rec.overlay.seed = seed;
        plans.push_back(std::move(plan));
    }

    try {
        fs::create_directories(cfg.out_dir);
        parallel_for(0, plans.size(), [&](std::size_t i) {
            generate_sequence(cfg.out_dir, plans[i], cleans[plans[i].clean_index], masks[plans[i].mask_index]);
            log::debug("generated " + plans[i].record.sequence_id);
        });
        for (auto& p : plans) manifest.sequences.push_back(std::move(p.record));
        const fs::path tmp = cfg.out_dir / (std::string(kManifestName) + ".tmp");
        write_text_file(tmp, manifest_to_json(manifest));
        fs::rename(tmp, cfg.out_dir / kManifestName);
    } catch (const std::exception& e) {
        std::error_code ec;
        fs::create_directories(cfg.out_dir, ec);
        std::ofstream marker(cfg.out_dir / kInvalidMarker, std::ios::binary | std::ios::trunc);
        marker << e.what() << '\n';
        throw;
    }
    log::info("dataset written: " + std::to_string(manifest.total_pairs()) + " pairs in " +
              std::to_string(manifest.sequences.size()) + " sequences");
    return manifest;
}

// ---------------------------------------------------------------------------
// Verify

namespace {

void verify_sequence(const fs::path& root, const SequenceRecord& rec, const VerifyOptions& options,
                     SequenceVerdict& verdict, long long& frames_checked) {
    auto problem = [&](std::string text) {
        verdict.ok = false;
        verdict.problems.push_back(std::move(text));
    };
    try {
        validate_overlay(rec.overlay, rec.clean_shape, rec.mask_shape);
    } catch (const Error& e) {
        problem(e.what());
    }
    if (rec.overlay.out_len != rec.frame_count) {
        problem("frame_count " + std::to_string(rec.frame_count) + " differs from overlay out_len " +
                std::to_string(rec.overlay.out_len));
    }

    const Geometry expect{rec.mask_shape.width, rec.mask_shape.height, rec.channels};
    const FramePattern pattern;
    const fs::path base = root / rec.relative_dir();
    for (const char* side : {"snowy", "clean"}) {
        const fs::path dir = base / side;
        try {
            const auto listing = list_sequence(dir);
            if (listing.first_index != 0) problem(std::string(side) + ": first index is not 0");
            if (static_cast<long long>(listing.files.size()) != rec.frame_count) {
                if (static_cast<long long>(listing.files.size()) < rec.frame_count) {
                    problem(std::string(to_string(Errc::MissingFrame)) + ": " + side + " has " +
                            std::to_string(listing.files.size()) + " of " + std::to_string(rec.frame_count) +
                            " frames");
                } else {
                    problem(std::string(side) + " has " + std::to_string(listing.files.size()) +
                            " frames, manifest says " + std::to_string(rec.frame_count));
                }
            }
            for (const auto& f : listing.files) {
                try {
                    const Frame frame = load_frame(f);
                    if (frame.geometry() != expect) {
                        problem(std::string(to_string(Errc::GeometryMismatch)) + ": " + f.string() + " is " +
                                describe(frame.geometry()) + ", expected " + describe(expect));
                    }
                    ++frames_checked;
                } catch (const Error& e) {
                    problem(e.what());
                }
            }
        } catch (const Error& e) {
            problem(e.what());
        }
    }

    auto check_sum = [&](const fs::path& path, std::uint64_t expected, const char* label) {
        std::error_code ec;
        if (!fs::exists(path, ec)) return;  // already reported as missing
        try {
            const auto got = file_checksum(path);
            if (got != expected) {
                problem(std::string("checksum mismatch on ") + label + ": expected " + to_hex(expected) + ", found " +
                        to_hex(got));
            }
        } catch (const Error& e) {
            problem(e.what());
        }
    };
    if (rec.frame_count > 0) {
        const auto first = pattern.format(0);
        const auto last = pattern.format(rec.frame_count - 1);
        check_sum(base / "snowy" / first, rec.checksums.snowy_first, "snowy first frame");
        check_sum(base / "snowy" / last, rec.checksums.snowy_last, "snowy last frame");
        check_sum(base / "clean" / first, rec.checksums.clean_first, "clean first frame");
        check_sum(base / "clean" / last, rec.checksums.clean_last, "clean last frame");
    }

    if (options.recompute && verdict.ok && rec.frame_count > 0) {
        try {
            const auto clean_files = list_sequence(rec.clean_source).files;
            const auto mask_files = list_sequence(rec.mask_source).files;
            for (long long t : {0LL, rec.frame_count - 1}) {
                const Frame gt = load_frame(clean_files.at(static_cast<std::size_t>(rec.overlay.t_start + t)));
                const ResidualFrame m = decode_mask(
                    load_frame16(mask_files.at(static_cast<std::size_t>((rec.overlay.mask_phase + t) % rec.mask_shape.frames))));
                const auto pair = compose_frame(gt, m, rec.overlay.dx, rec.overlay.dy);
                if (!(pair.snowy == load_frame(base / "snowy" / pattern.format(t))) ||
                    !(pair.clean == load_frame(base / "clean" / pattern.format(t)))) {
                    problem("recomposed frame " + std::to_string(t) + " differs from disk");
                }
            }
        } catch (const std::exception& e) {
            problem(std::string("recompute failed: ") + e.what());
        }
    }
}

}  // namespace

VerifyReport verify_dataset(const fs::path& manifest_path, const VerifyOptions& options) {
    VerifyReport report;
    DatasetManifest manifest;
    try {
        manifest = read_manifest(manifest_path);
    } catch (const Error& e) {
        report.dataset_problems.push_back(e.what());
        return report;
    }
    const fs::path root = manifest_path.parent_path().empty() ? fs::path(".") : manifest_path.parent_path();
    if (fs::exists(root / kInvalidMarker)) {
        report.dataset_problems.push_back("dataset marked invalid by an aborted build");
    }
    std::vector<std::string> ids;
    for (const auto& r : manifest.sequences) ids.push_back(r.sequence_id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        report.dataset_problems.push_back("duplicate sequence_id in manifest");
    }
    if (static_cast<long long>(manifest.sequences.size()) != static_cast<long long>(manifest.n_train) + manifest.n_test) {
        report.dataset_problems.push_back("sequence count differs from n_train + n_test");
    }

    report.sequences.resize(manifest.sequences.size());
    std::vector<long long> checked(manifest.sequences.size(), 0);
    parallel_for(0, manifest.sequences.size(), [&](std::size_t i) {
        const auto& rec = manifest.sequences[i];
        auto& v = report.sequences[i];
        v.sequence_id = rec.sequence_id;
        const std::string expected_split = static_cast<int>(i) < manifest.n_train ? "train" : "test";
        if (rec.split != expected_split) {
            v.ok = false;
            v.problems.push_back("split '" + rec.split + "' expected '" + expected_split + "'");
        }
        verify_sequence(root, rec, options, v, checked[i]);
    });
    for (auto c : checked) report.frames_checked += c;
    return report;
}

}  // namespace snowforge
