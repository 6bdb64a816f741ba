#include "snowforge/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "csv.hpp"
#include "snowforge/parallel.hpp"
#include "snowforge/quality.hpp"

namespace snowforge {

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

MatchStats feature_stats(const FrameSequence& seq, std::string sequence_id, std::string method) {
    MatchStats stats{std::move(sequence_id), std::move(method), {}, {}};
    const std::size_t n = seq.size();
    std::vector<Features> features(n);
    stats.keypoints.assign(n, 0);
    parallel_for(0, n, [&](std::size_t t) {
        const auto kps = detect_keypoints(seq[t]);
        stats.keypoints[t] = static_cast<int>(kps.size());
        features[t] = compute_descriptors(seq[t], kps);
    });
    stats.matches.assign(n > 0 ? n - 1 : 0, 0);
    parallel_for(1, n, [&](std::size_t t) {
        stats.matches[t - 1] =
            static_cast<int>(match_features(features[t - 1].descriptors, features[t].descriptors).size());
    });
    return stats;
}

namespace {

void require_paired(const FrameSequence& a, const FrameSequence& b, const char* what) {
    if (a.size() != b.size() || a.geometry() != b.geometry()) {
        throw Error(Errc::PairingMismatch, std::string(what) + ": " + std::to_string(a.size()) + " frames of " +
                                               describe(a.geometry()) + " vs " + std::to_string(b.size()) +
                                               " frames of " + describe(b.geometry()));
    }
}

QualitySummary summarize_quality(const std::vector<double>& p, const std::vector<double>& s) {
    return {mean_of(p), median_of(p), mean_of(s), median_of(s)};
}

}  // namespace

SequenceEvaluation evaluate_sequence(const FrameSequence& method_seq, const FrameSequence& clean_seq,
                                     const FrameSequence& snowy_seq, const std::string& sequence_id,
                                     const std::string& method) {
    require_paired(method_seq, clean_seq, "method vs clean");
    require_paired(snowy_seq, clean_seq, "snowy vs clean");

    SequenceEvaluation ev;
    ev.stats = feature_stats(method_seq, sequence_id, method);
    const std::size_t n = method_seq.size();
    ev.psnr.resize(n);
    ev.ssim.resize(n);
    std::vector<double> in_psnr(n), in_ssim(n);
    parallel_for(0, n, [&](std::size_t t) {
        ev.psnr[t] = psnr(method_seq[t], clean_seq[t]);
        ev.ssim[t] = ssim(method_seq[t], clean_seq[t]);
        in_psnr[t] = psnr(snowy_seq[t], clean_seq[t]);
        in_ssim[t] = ssim(snowy_seq[t], clean_seq[t]);
    });
    ev.quality = summarize_quality(ev.psnr, ev.ssim);
    ev.input_quality = summarize_quality(in_psnr, in_ssim);

    ev.rows.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        MetricsRow row;
        row.sequence_id = sequence_id;
        row.method = method;
        row.t = static_cast<long long>(t);
        row.keypoints = ev.stats.keypoints[t];
        if (t > 0) row.matches_prev = ev.stats.matches[t - 1];
        row.psnr_db = ev.psnr[t];
        row.ssim = ev.ssim[t];
        ev.rows.push_back(std::move(row));
    }
    return ev;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
    out << kMetricsHeader << '\n';
    char num[64];
    for (const auto& r : rows) {
        out << csv::quote(r.sequence_id) << ',' << csv::quote(r.method) << ',' << r.t << ',' << r.keypoints << ',';
        if (r.matches_prev) out << *r.matches_prev;
        std::snprintf(num, sizeof(num), ",%.6f,%.8f", r.psnr_db, r.ssim);
        out << num << '\n';
    }
}

void write_metrics_csv(const fs::path& path, const std::vector<MetricsRow>& rows) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    write_metrics_csv(out, rows);
    if (!out) throw Error(Errc::IoError, "failed writing " + path.string());
}

}  // namespace snowforge
