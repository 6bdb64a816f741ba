#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "snowforge/features.hpp"
#include "snowforge/frame.hpp"
#include "snowforge/frame_io.hpp"

namespace snowforge {

/// Keypoint and frame-to-frame match counts of one method on one sequence.
struct MatchStats {
    std::string sequence_id;
    std::string method;
    std::vector<int> keypoints;  ///< per frame
    std::vector<int> matches;    ///< per adjacent pair (t-1, t); size = frames - 1
};

/// One CSV row: metrics of frame t.
struct MetricsRow {
    std::string sequence_id;
    std::string method;
    long long t{0};
    int keypoints{0};
    std::optional<int> matches_prev;  ///< empty for t = 0
    double psnr_db{0.0};
    double ssim{0.0};
};

struct QualitySummary {
    double mean_psnr{0.0};
    double median_psnr{0.0};
    double mean_ssim{0.0};
    double median_ssim{0.0};
};

struct SequenceEvaluation {
    MatchStats stats;
    std::vector<double> psnr;  ///< method vs clean, per frame
    std::vector<double> ssim;
    QualitySummary quality;        ///< method vs clean
    QualitySummary input_quality;  ///< snowy vs clean, for reference
    std::vector<MetricsRow> rows;
};

/// Keypoints of every frame and mutual ratio-test matches between neighbours.
MatchStats feature_stats(const FrameSequence& seq, std::string sequence_id, std::string method);

/// Scores `method_seq` against `clean_seq`. All three sequences must pair
/// (same length and geometry), otherwise PairingMismatch.
SequenceEvaluation evaluate_sequence(const FrameSequence& method_seq, const FrameSequence& clean_seq,
                                     const FrameSequence& snowy_seq, const std::string& sequence_id,
                                     const std::string& method);

inline constexpr const char* kMetricsHeader = "sequence_id,method,t,keypoints,matches_prev,psnr_db,ssim";

/// Header line plus one line per row; psnr with 6 decimals, ssim with 8.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_metrics_csv(const fs::path& path, const std::vector<MetricsRow>& rows);

/// Arithmetic mean; median averages the two middle values for even counts.
double mean_of(const std::vector<double>& values);
double median_of(std::vector<double> values);

}  // namespace snowforge
