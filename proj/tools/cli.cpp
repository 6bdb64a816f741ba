#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "snowforge/checksum.hpp"
#include "snowforge/cleaner.hpp"
#include "snowforge/dataset.hpp"
#include "snowforge/evaluation.hpp"
#include "snowforge/fixture.hpp"
#include "snowforge/log.hpp"
#include "snowforge/mask.hpp"
#include "snowforge/median.hpp"
#include "snowforge/overlay.hpp"
#include "snowforge/parallel.hpp"
#include "snowforge/report.hpp"

namespace snowforge::cli {

namespace {

using json = nlohmann::json;

/// Options shared by every subcommand.
struct GlobalConfig {
    std::uint64_t seed{0};
    std::size_t memory_budget{kDefaultMemoryBudget};
    unsigned threads{0};
    std::string log_level{"warn"};
    std::string config_path;
    json file = json::object();
};

/// Flag value when given, otherwise the config-file key, otherwise `fallback`.
template <typename T>
T resolve(const CLI::Option* opt, const T& flag_value, const json& file, const char* key, const T& fallback) {
    if (opt != nullptr && opt->count() > 0) return flag_value;
    if (file.contains(key)) {
        try {
            return file.at(key).get<T>();
        } catch (const json::exception& e) {
            throw Error(Errc::SchemaError, std::string("config key '") + key + "': " + e.what());
        }
    }
    return fallback;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read config " + path);
    try {
        json j = json::parse(in);
        if (!j.is_object()) throw Error(Errc::SchemaError, path + ": config must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaError, path + ": " + e.what());
    }
}

std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv("SNOWFORGE_SEED");
    if (v == nullptr || *v == '\0') return std::nullopt;
    char* end = nullptr;
    const auto parsed = std::strtoull(v, &end, 0);
    if (end == v || *end != '\0') throw Error(Errc::InvalidArgument, std::string("SNOWFORGE_SEED='") + v + "' is not an integer");
    return parsed;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << text;
}

nlohmann::ordered_json overlay_json(const OverlaySpec& s) {
    return {{"dx", s.dx}, {"dy", s.dy}, {"t_start", s.t_start}, {"mask_phase", s.mask_phase},
            {"out_len", s.out_len}, {"seed", s.seed}};
}

std::vector<fs::path> expand_sources(const std::vector<std::string>& dirs) {
    std::vector<fs::path> out;
    for (const auto& d : dirs) {
        auto found = discover_sources(d);
        out.insert(out.end(), found.begin(), found.end());
    }
    return out;
}

std::string default_sequence_id(const fs::path& clean_dir) {
    const fs::path p = fs::absolute(clean_dir).lexically_normal();
    fs::path leaf = p.filename().empty() ? p.parent_path() : p;
    if (leaf.filename() == "clean" && leaf.has_parent_path()) return leaf.parent_path().filename().string();
    return leaf.filename().string();
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"snowforge: paired marine-snow dataset synthesis and snow-removal evaluation"};
    app.name(args.empty() ? "snowforge" : fs::path(args.front()).filename().string());
    app.require_subcommand(1);
    app.fallthrough();

    GlobalConfig g;
    std::uint64_t seed_flag = 0;
    auto* seed_opt = app.add_option("--seed", seed_flag, "Master seed (falls back to SNOWFORGE_SEED, then 0)");
    std::size_t budget_flag = kDefaultMemoryBudget;
    auto* budget_opt = app.add_option("--memory-budget", budget_flag, "Band buffer budget in bytes");
    unsigned threads_flag = 0;
    auto* threads_opt = app.add_option("--threads", threads_flag, "Worker threads (0 = auto); never changes outputs");
    std::string level_flag = "warn";
    auto* level_opt = app.add_option("--log-level", level_flag, "debug | info | warn | error | off");
    app.add_option("--config", g.config_path, "JSON config file; flags override its keys");

    // median
    auto* median = app.add_subcommand("median", "Per-pixel temporal median of a frame directory");
    std::string median_in, median_out;
    int band_height = 0;
    median->add_option("--in", median_in, "Sequence directory")->required();
    median->add_option("--out", median_out, "Output PNG")->required();
    median->add_option("--band-height", band_height, "Rows per band (default: derived from --memory-budget)");

    // extract-mask
    auto* extract = app.add_subcommand("extract-mask", "Snow residual masks of a patch (frame - patch median)");
    std::string extract_in, extract_out;
    int x0 = 0, y0 = 0, patch_w = kDefaultPatchWidth, patch_h = kDefaultPatchHeight, noise_floor = 0;
    extract->add_option("--in", extract_in, "Snow-affected sequence directory")->required();
    extract->add_option("--out", extract_out, "Mask sequence directory")->required();
    auto* x0_opt = extract->add_option("--x0", x0, "Patch left edge");
    auto* y0_opt = extract->add_option("--y0", y0, "Patch top edge");
    auto* pw_opt = extract->add_option("--width", patch_w, "Patch width")->capture_default_str();
    auto* ph_opt = extract->add_option("--height", patch_h, "Patch height")->capture_default_str();
    auto* nf_opt = extract->add_option("--noise-floor", noise_floor, "Zero residuals with |r| <= this")->capture_default_str();

    // compose
    auto* compose = app.add_subcommand("compose", "Overlay a mask sequence on a random crop of a clean clip");
    std::string compose_gt, compose_masks, compose_out;
    long long compose_len = 0;
    compose->add_option("--gt", compose_gt, "Clean sequence directory")->required();
    compose->add_option("--masks", compose_masks, "Mask sequence directory")->required();
    compose->add_option("--out", compose_out, "Output directory (snowy/, clean/, overlay.json)")->required();
    compose->add_option("--out-len", compose_len, "Frames to generate (default: all clean frames)");

    // build-dataset
    auto* build = app.add_subcommand("build-dataset", "Generate a paired train/test dataset with a manifest");
    std::vector<std::string> clean_dirs, mask_dirs;
    int n_train = 300, n_test = 10;
    long long out_len = 269;
    std::string build_out;
    auto* clean_opt = build->add_option("--clean-dir", clean_dirs, "Clean source directory (repeatable)");
    auto* mask_opt = build->add_option("--mask-dir", mask_dirs, "Mask source directory (repeatable)");
    auto* ntrain_opt = build->add_option("--n-train", n_train, "Training sequences")->capture_default_str();
    auto* ntest_opt = build->add_option("--n-test", n_test, "Test sequences")->capture_default_str();
    auto* len_opt = build->add_option("--out-len", out_len, "Frames per sequence")->capture_default_str();
    auto* bout_opt = build->add_option("--out", build_out, "Dataset root");

    // denoise
    auto* denoise = app.add_subcommand("denoise", "Temporal-median snow removal baseline");
    std::string denoise_in, denoise_out, mode_text = "replace-rgb";
    CleanerParams cleaner;
    denoise->add_option("--in", denoise_in, "Snowy sequence directory")->required();
    denoise->add_option("--out", denoise_out, "Output directory")->required();
    auto* win_opt = denoise->add_option("--window", cleaner.window, "Odd temporal window")->capture_default_str();
    auto* tau_opt = denoise->add_option("--tau", cleaner.tau, "Luma detection threshold")->capture_default_str();
    auto* mode_opt = denoise->add_option("--mode", mode_text, "replace-rgb | replace-luma")->capture_default_str();

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Keypoints, matches, PSNR and SSIM of a method's output");
    std::string eval_clean, eval_snowy, eval_method, eval_label, eval_out, eval_seq;
    evaluate->add_option("--clean", eval_clean, "Clean (reference) sequence")->required();
    evaluate->add_option("--snowy", eval_snowy, "Snowy input sequence")->required();
    evaluate->add_option("--method", eval_method, "Method output sequence")->required();
    evaluate->add_option("--label", eval_label, "Method name for reports")->required();
    evaluate->add_option("--out", eval_out, "Metrics CSV")->required();
    evaluate->add_option("--sequence-id", eval_seq, "Sequence id (default: derived from --clean)");

    // report
    auto* report = app.add_subcommand("report", "Summary tables and SVG charts from metrics CSVs");
    std::vector<std::string> metrics_paths, chart_methods;
    std::string chart_metric = "keypoints", chart_out, summary_out, chart_seq;
    int smoothing = 15;
    report->add_option("--metrics", metrics_paths, "Metrics CSV (repeatable)")->required();
    report->add_option("--chart", chart_metric, "keypoints | matches_prev | psnr_db | ssim")->capture_default_str();
    report->add_option("--smoothing", smoothing, "Odd moving-average window")->capture_default_str();
    report->add_option("--out", chart_out, "SVG output path");
    report->add_option("--summary", summary_out, "Summary CSV output path");
    report->add_option("--methods", chart_methods, "Methods to plot (default: all)");
    report->add_option("--sequence", chart_seq, "Plot only this sequence id");

    // verify
    auto* verify = app.add_subcommand("verify", "Re-check a generated dataset against its manifest");
    std::string manifest_path;
    bool recompute = false;
    verify->add_option("--manifest", manifest_path, "Path to manifest.json")->required();
    verify->add_flag("--recompute", recompute, "Recompose first/last pairs from the recorded sources");

    // fixture
    auto* fixture = app.add_subcommand("fixture", "Write the standard synthetic test fixture");
    std::string fixture_out;
    fixture->add_option("--out", fixture_out, "Output directory")->required();

    std::vector<char*> argv;
    std::vector<std::string> storage = args.empty() ? std::vector<std::string>{"snowforge"} : args;
    for (auto& a : storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        g.file = load_config(g.config_path);
        std::uint64_t fallback_seed = 0;
        if (auto s = env_seed()) fallback_seed = *s;
        g.seed = resolve<std::uint64_t>(seed_opt, seed_flag, g.file, "seed", fallback_seed);
        g.memory_budget = resolve<std::size_t>(budget_opt, budget_flag, g.file, "memory_budget", kDefaultMemoryBudget);
        g.threads = resolve<unsigned>(threads_opt, threads_flag, g.file, "threads", 0u);
        g.log_level = resolve<std::string>(level_opt, level_flag, g.file, "log_level", "warn");
        log::Level lvl{};
        if (!log::parse_level(g.log_level, lvl)) {
            std::cerr << "unknown log level '" << g.log_level << "'\n";
            return kUsageError;
        }
        log::set_level(lvl);
        set_thread_count(g.threads);

        if (median->parsed()) {
            const auto listing = list_sequence(median_in);
            const Geometry geom = probe_frame(listing.files.front());
            band_height = resolve<int>(median->get_option("--band-height"), band_height, g.file, "band_height", 0);
            const BandPlan plan = band_height > 0 ? BandPlan::with_height(band_height, geom.height)
                                                  : BandPlan::for_budget(geom, listing.files.size(), g.memory_budget);
            log::info("median over " + std::to_string(listing.files.size()) + " frames, band height " +
                      std::to_string(plan.band_height));
            const Frame med = temporal_median_banded(median_in, plan);
            if (fs::path(median_out).has_parent_path()) fs::create_directories(fs::path(median_out).parent_path());
            save_frame(median_out, med);
            std::cout << "median of " << listing.files.size() << " frames written to " << median_out << '\n';
            return kOk;
        }

        if (extract->parsed()) {
            if (x0_opt->count() == 0 && !g.file.contains("x0")) throw Error(Errc::InvalidArgument, "--x0 is required");
            if (y0_opt->count() == 0 && !g.file.contains("y0")) throw Error(Errc::InvalidArgument, "--y0 is required");
            const Rect rect{resolve<int>(x0_opt, x0, g.file, "x0", 0), resolve<int>(y0_opt, y0, g.file, "y0", 0),
                            resolve<int>(pw_opt, patch_w, g.file, "width", kDefaultPatchWidth),
                            resolve<int>(ph_opt, patch_h, g.file, "height", kDefaultPatchHeight)};
            noise_floor = resolve<int>(nf_opt, noise_floor, g.file, "noise_floor", 0);
            const FrameSequence seq = load_sequence(extract_in);
            MaskSequence masks = extract_patch_masks(seq, rect, noise_floor);
            masks.median_ref = "median.png";
            // The patch median is recomputed for the sidecar reference image.
            std::vector<Frame> patches;
            for (const auto& f : seq) patches.push_back(crop(f, rect));
            save_mask_sequence(extract_out, masks);
            save_frame(fs::path(extract_out) / "median.png", temporal_median(std::span<const Frame>(patches)));
            std::cout << masks.size() << " masks of " << describe(masks.geometry()) << " written to " << extract_out << '\n';
            return kOk;
        }

        if (compose->parsed()) {
            const FrameSequence gt = load_sequence(compose_gt);
            const MaskSequence masks = load_mask_sequence(compose_masks);
            const long long len = compose_len > 0 ? compose_len : static_cast<long long>(gt.size());
            SplitMix64 rng(g.seed);
            const Geometry gg = gt.geometry(), mg = masks.geometry();
            OverlaySpec spec = draw_overlay_spec(rng, {gg.width, gg.height, static_cast<long long>(gt.size())},
                                                 {mg.width, mg.height, static_cast<long long>(masks.size())}, len);
            spec.seed = g.seed;
            const auto pair = compose_snowy(gt, masks, spec);
            save_sequence(fs::path(compose_out) / "snowy", pair.snowy);
            save_sequence(fs::path(compose_out) / "clean", pair.clean);
            write_json(fs::path(compose_out) / "overlay.json", overlay_json(spec));
            std::cout << len << " pairs written to " << compose_out << '\n';
            return kOk;
        }

        if (build->parsed()) {
            DatasetConfig cfg;
            auto cleans = resolve<std::vector<std::string>>(clean_opt, clean_dirs, g.file, "clean_sources", {});
            auto maskz = resolve<std::vector<std::string>>(mask_opt, mask_dirs, g.file, "mask_sources", {});
            if (cleans.empty() || maskz.empty()) {
                throw Error(Errc::InvalidArgument, "clean and mask sources are required (--clean-dir/--mask-dir or config)");
            }
            cfg.clean_sources = expand_sources(cleans);
            cfg.mask_sources = expand_sources(maskz);
            cfg.n_train = resolve<int>(ntrain_opt, n_train, g.file, "n_train", 300);
            cfg.n_test = resolve<int>(ntest_opt, n_test, g.file, "n_test", 10);
            cfg.out_len = resolve<long long>(len_opt, out_len, g.file, "out_len", 269);
            cfg.out_dir = resolve<std::string>(bout_opt, build_out, g.file, "out", std::string{});
            cfg.master_seed = g.seed;
            if (cfg.out_dir.empty()) throw Error(Errc::InvalidArgument, "--out is required");
            const auto manifest = build_dataset(cfg);
            std::cout << manifest.sequences.size() << " sequences, " << manifest.total_pairs() << " paired frames written to "
                      << cfg.out_dir.string() << '\n';
            return kOk;
        }

        if (denoise->parsed()) {
            cleaner.window = resolve<int>(win_opt, cleaner.window, g.file, "window", 5);
            cleaner.tau = resolve<int>(tau_opt, cleaner.tau, g.file, "tau", 25);
            mode_text = resolve<std::string>(mode_opt, mode_text, g.file, "mode", "replace-rgb");
            if (!parse_replace_mode(mode_text, cleaner.mode)) {
                std::cerr << "unknown mode '" << mode_text << "'\n";
                return kUsageError;
            }
            cleaner.validate();
            const FrameSequence in = load_sequence(denoise_in);
            const FrameSequence out = temporal_median_clean(in, cleaner);
            save_sequence(denoise_out, out);
            std::cout << out.size() << " frames cleaned into " << denoise_out << '\n';
            return kOk;
        }

        if (evaluate->parsed()) {
            const FrameSequence clean = load_sequence(eval_clean);
            const FrameSequence snowy = load_sequence(eval_snowy);
            const auto method = load_external_enhanced(eval_method, clean, eval_label);
            const std::string seq_id = eval_seq.empty() ? default_sequence_id(eval_clean) : eval_seq;
            const auto ev = evaluate_sequence(method.frames, clean, snowy, seq_id, method.method);
            write_metrics_csv(eval_out, ev.rows);
            char line[256];
            std::snprintf(line, sizeof(line), "%s/%s: mean keypoints %.2f, mean matches %.2f, PSNR %.3f dB (input %.3f), SSIM %.4f (input %.4f)",
                          seq_id.c_str(), eval_label.c_str(),
                          mean_of(std::vector<double>(ev.stats.keypoints.begin(), ev.stats.keypoints.end())),
                          mean_of(std::vector<double>(ev.stats.matches.begin(), ev.stats.matches.end())),
                          ev.quality.mean_psnr, ev.input_quality.mean_psnr, ev.quality.mean_ssim, ev.input_quality.mean_ssim);
            std::cout << line << '\n';
            return kOk;
        }

        if (report->parsed()) {
            std::vector<MetricsRow> rows;
            for (const auto& p : metrics_paths) {
                auto r = read_metrics_csv(p);
                rows.insert(rows.end(), r.begin(), r.end());
            }
            const auto summary = summarize(rows);
            std::cout << summary_table(summary);
            if (!summary_out.empty()) write_text(summary_out, summary_csv(summary));
            if (!chart_out.empty()) {
                ChartSpec spec;
                spec.metric = parse_metric(chart_metric);
                spec.smoothing_window = smoothing;
                spec.methods = chart_methods;
                if (!chart_seq.empty()) spec.sequence_id = chart_seq;
                write_text(chart_out, render_chart(spec, rows));
            }
            return kOk;
        }

        if (verify->parsed()) {
            const auto rep = verify_dataset(manifest_path, VerifyOptions{recompute});
            for (const auto& p : rep.dataset_problems) std::cout << "dataset: " << p << '\n';
            std::size_t failed = 0;
            for (const auto& v : rep.sequences) {
                if (v.ok) continue;
                ++failed;
                for (const auto& p : v.problems) std::cout << v.sequence_id << ": FAIL " << p << '\n';
            }
            std::cout << rep.sequences.size() - failed << "/" << rep.sequences.size() << " sequences pass, "
                      << rep.frames_checked << " frames decoded\n";
            return rep.passed() ? kOk : kDataError;
        }

        if (fixture->parsed()) {
            const auto fx = make_fixture(fixture_out, g.seed);
            std::cout << "fixture (seed " << g.seed << ") written to " << fixture_out << ": " << fx.snowy.size()
                      << " pairs of " << describe(fx.snowy.geometry()) << '\n';
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == Errc::InvalidArgument ? kUsageError : kDataError;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsageError;
}

}  // namespace snowforge::cli
